"""Walk through corpus preparation: normalization, chunking with overlap,
entity extraction and domain assignment.

Run from the repository root:  python demos/01_chunking_and_entities.py
"""

from lexrag.bundled import mini_corpus_path
from lexrag.corpus import (
    ChunkPolicy,
    assign_domain,
    extract_entities,
    load_documents,
    normalize_document,
    normalize_text,
    split_chunks,
)

# --- normalization -----------------------------------------------------------
raw = "The  accused   was\ncharged under\n\n\n\nIPC  Section 420."
print("raw:       ", repr(raw))
print("normalized:", repr(normalize_text(raw)))
print()

# --- chunking with overlap ---------------------------------------------------
docs = load_documents(mini_corpus_path())
doc = normalize_document(docs[0])
long_body = " ".join(normalize_document(d).body for d in docs[:5])

from lexrag.corpus import Document

big = Document(id="joined", body=long_body)
policy = ChunkPolicy(max_chunk_chars=600, overlap_chars=75)
chunks = split_chunks(big, policy)
print(f"{len(long_body)} chars -> {len(chunks)} chunks (max 600, overlap 75)")
for chunk in chunks[:3]:
    print(f"  {chunk.chunk_id}: [{chunk.char_start}, {chunk.char_end}) "
          f"len={len(chunk.text)}")
first, second = chunks[0], chunks[1]
print("overlap holds:", second.text[:75] == first.text[-75:])
print()

# --- entity extraction -------------------------------------------------------
text = ("The court applied IPC Section 420 and Article 19(1)(a), citing "
        "Kesavananda Bharati v. State of Kerala and Section 73 of the "
        "Indian Contract Act.")
for entity in extract_entities(text):
    print(f"  {entity.kind.value:15s} {entity.surface!r} at {entity.span}")
print()

# --- domain assignment -------------------------------------------------------
for sample in (
    "murder punishment imprisonment under the IPC",
    "breach of contract and damages for the promisee",
    "writ petition under the constitution for fundamental rights",
    "a paragraph about gardening",
):
    print(f"  {assign_domain(sample).value:18s} <- {sample!r}")
