from rebuttalkit.retrieval import build_manuscript, chunk_by_paragraph, paragraphs
from rebuttalkit.retrieval.chunking import MIN_PARAGRAPH_WORDS


def words(n: int, tag: str) -> str:
    return " ".join(f"{tag}{i}" for i in range(n))


def test_paragraphs_split_on_blank_lines():
    body = "one two\nthree\n\nfour\n\n\nfive"
    assert paragraphs(body) == ["one two\nthree", "four", "five"]


def test_long_paragraphs_become_single_chunks():
    a, b = words(20, "a"), words(25, "b")
    chunks = chunk_by_paragraph(f"{a}\n\n{b}")
    assert [c.text for c in chunks] == [a, b]
    assert [c.id for c in chunks] == ["p0", "p1"]
    assert [c.ordinal for c in chunks] == [0, 1]


def test_short_paragraph_merges_forward():
    short, long = words(5, "s"), words(20, "l")
    chunks = chunk_by_paragraph(f"{short}\n\n{long}")
    assert len(chunks) == 1
    assert chunks[0].text == f"{short}\n\n{long}"


def test_trailing_short_paragraph_merges_backward():
    long, short = words(20, "l"), words(4, "s")
    chunks = chunk_by_paragraph(f"{long}\n\n{short}")
    assert len(chunks) == 1
    assert chunks[0].text == f"{long}\n\n{short}"


def test_chain_of_short_paragraphs_accumulates_until_threshold():
    # 3 paragraphs of 6 words: first two merge (12 < 15), third pushes to 18
    parts = [words(6, t) for t in ("a", "b", "c")]
    chunks = chunk_by_paragraph("\n\n".join(parts))
    assert len(chunks) == 1
    assert chunks[0].text == "\n\n".join(parts)


def test_threshold_boundary_exactly_min_words():
    exact = words(MIN_PARAGRAPH_WORDS, "x")
    nxt = words(MIN_PARAGRAPH_WORDS, "y")
    chunks = chunk_by_paragraph(f"{exact}\n\n{nxt}")
    assert len(chunks) == 2


def test_single_short_paragraph_still_yields_one_chunk():
    chunks = chunk_by_paragraph(words(3, "z"))
    assert len(chunks) == 1
    assert chunks[0].text == words(3, "z")


def test_empty_body_yields_no_chunks():
    assert chunk_by_paragraph("") == []
    assert chunk_by_paragraph("\n\n  \n\n") == []


def test_custom_prefix_and_min_words():
    chunks = chunk_by_paragraph(f"{words(8, 'a')}\n\n{words(8, 'b')}", id_prefix="k", min_words=8)
    assert [c.id for c in chunks] == ["k0", "k1"]


def test_build_manuscript_namespaces_chunk_ids(manuscript):
    assert manuscript.id == "m1"
    assert all(c.id.startswith("m1:p") for c in manuscript.chunks)
    assert [c.ordinal for c in manuscript.chunks] == list(range(len(manuscript.chunks)))
    # title line is short, so it merged into the first body paragraph
    assert "Momentum Queues" in manuscript.chunks[0].text


def test_chunk_concatenation_preserves_every_paragraph(manuscript):
    for para in paragraphs(manuscript.body):
        assert any(para in chunk.text for chunk in manuscript.chunks)
