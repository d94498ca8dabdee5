from hypothesis import given, strategies as st

from reactive_lint.spans import LineIndex

TEXT = st.text(alphabet=st.sampled_from(list("ab \n\t$é€😀{}")), max_size=80)


def recount(text: str, offset: int) -> tuple[int, int]:
    before = text[:offset]
    line = before.count("\n") + 1
    col = offset - (before.rfind("\n") + 1) + 1
    return line, col


def test_ascii_span():
    index = LineIndex("a.ts", "ab\ncd")
    span = index.span(3, 5)
    assert (span.start_byte, span.end_byte) == (3, 5)
    assert (span.start_line, span.start_col, span.end_line, span.end_col) == (2, 1, 2, 3)


def test_multibyte_columns_count_characters():
    text = "é = 1;\nconst 😀 = 2;"
    index = LineIndex("a.ts", text)
    start = text.index("😀")
    span = index.span(start, start + 1)
    assert span.start_line == 2 and span.start_col == 7
    assert span.end_byte - span.start_byte == 4
    assert text.encode()[span.start_byte:span.end_byte].decode() == "😀"


def test_line_bounds():
    index = LineIndex("a.ts", "one\ntwo\n")
    assert index.line_count == 3
    assert index.line_start(2) == 4
    assert index.line_end(2) == 7


@given(TEXT, st.data())
def test_span_round_trip(text, data):
    start = data.draw(st.integers(0, len(text)))
    end = data.draw(st.integers(start, len(text)))
    span = LineIndex("t.ts", text).span(start, end)
    assert span.start_byte <= span.end_byte
    assert text.encode("utf-8")[span.start_byte:span.end_byte].decode("utf-8") == text[start:end]
    assert (span.start_line, span.start_col) == recount(text, start)
    assert (span.end_line, span.end_col) == recount(text, end)


@given(TEXT, st.data())
def test_byte_char_offsets_invert(text, data):
    index = LineIndex("t.ts", text)
    offset = data.draw(st.integers(0, len(text)))
    assert index.char_offset(index.byte_offset(offset)) == offset
