"""Exercise the HTTP API in-process: ingest, build, query, chat, metrics.

Run from the repository root:  python demos/06_http_service.py
(For a real server use:  lexrag serve --index <dir>  or  --config <toml>.)
"""

from fastapi.testclient import TestClient

from lexrag.bundled import mini_corpus_path
from lexrag.corpus import load_documents
from lexrag.embedding import EmbeddingProviderConfig, HashEmbeddingProvider
from lexrag.service.app import create_app
from lexrag.service.engine import Engine

config = EmbeddingProviderConfig(dim=256)
engine = Engine(HashEmbeddingProvider(256), provider_config=config)
engine.ingest_documents(load_documents(mini_corpus_path()))
engine.build_index("flat")

client = TestClient(create_app(engine))

print("GET /healthz ->", client.get("/healthz").json())

response = client.post("/query", json={
    "text": "What is the punishment for IPC Section 420?", "k": 5,
})
body = response.json()
print(f"\nPOST /query -> decision={body['decision']}, "
      f"{len(body['sources'])} sources, latency={body['latency_ms']}")
print("top source:", body["sources"][0]["chunk_id"])

chat = client.post("/chat", json={"message": "What is theft?"})
session_id = chat.json()["session_id"]
chat2 = client.post("/chat", json={"session_id": session_id,
                                   "message": "And what about robbery?"})
print(f"\nPOST /chat -> session={session_id}, "
      f"transcript has {len(chat2.json()['transcript'])} turns")

build = client.post("/index/build", json={
    "kind": "hnsw", "params": {"M": 8, "ef_construction": 32, "ef_search": 32},
})
print("\nPOST /index/build ->", build.json())

error = client.post("/query", json={"text": ""})
print("\nPOST /query with empty text ->", error.status_code, error.json())

print("\nGET /metrics ->")
print(client.get("/metrics").text)
