import pytest
from hypothesis import given, strategies as st

from reactive_lint.script import tokenize
from reactive_lint.workspace import SourceUnit

from conftest import FIXTURES

WHITESPACE = " \t\r\n\f\v\u00a0\ufeff\u2028\u2029"


def kinds_and_texts(src):
    return [(t.kind, t.text) for t in tokenize(SourceUnit.from_text("a.ts", src))]


def covered(src: str, tokens) -> bool:
    """Token texts plus the whitespace between them rebuild the input exactly."""
    pos = 0
    out = []
    for tok in tokens:
        gap = src[pos:tok.start]
        if gap.strip(WHITESPACE):
            return False
        out.append(gap)
        out.append(tok.text)
        assert src[tok.start:tok.end] == tok.text
        pos = tok.end
    tail = src[pos:]
    out.append(tail)
    return not tail.strip(WHITESPACE) and "".join(out) == src


def test_empty_input():
    assert tokenize(SourceUnit.from_text("a.ts", "")) == []


def test_subscribe_call():
    assert [t for _, t in kinds_and_texts("this.data$.subscribe(x => {})")] == [
        "this", ".", "data$", ".", "subscribe", "(", "x", "=>", "{", "}", ")",
    ]


def test_literals_stay_whole():
    toks = kinds_and_texts("const s = 'a // b'; const t = `x ${ y + `z` } w`; // end")
    assert ("string_literal", "'a // b'") in toks
    assert ("template_literal", "`x ${ y + `z` } w`") in toks
    assert toks[-1] == ("comment", "// end")


def test_regex_versus_division():
    toks = kinds_and_texts("const r = /a\\/b[/]/gi; const q = a / b / c;")
    assert ("regex", "/a\\/b[/]/gi") in toks
    assert [t for k, t in toks if t == "/"] == ["/", "/"]


def test_unknown_bytes_do_not_stop_lexing():
    toks = kinds_and_texts("a \x01 b #c")
    assert ("unknown", "\x01") in toks
    assert toks[-1] == ("identifier", "#c")


def test_numbers_and_keywords():
    toks = kinds_and_texts("return 0x1F + 1_000 + .5e-3;")
    assert toks[0] == ("keyword", "return")
    assert [t for k, t in toks if k == "number"] == ["0x1F", "1_000", ".5e-3"]


ALL_SCRIPTS = sorted(p for p in FIXTURES.rglob("*.ts"))


@pytest.mark.parametrize("path", ALL_SCRIPTS, ids=lambda p: str(p.relative_to(FIXTURES)))
def test_fixture_files_fully_covered(path):
    src = path.read_text(encoding="utf-8")
    assert covered(src, tokenize(SourceUnit.from_text(path.name, src)))


PIECES = st.sampled_from(
    [
        "this", ".", "data$", "subscribe", "(", ")", "{", "}", "=>", "=", ";", ",",
        "'str'", '"dq"', "`tpl ${x}`", "`", "'", '"', "/", "/re/g", "// line\n", "/* block */",
        "/*", "42", "3.5", "@Component", "<T>", "?.", "??", "!", "é", "😀", "\\", "#", "\x00",
        " ", "\n", "\t", "\r\n",
    ]
)


@given(st.lists(PIECES, max_size=40).map("".join))
def test_tokenize_covers_random_streams(src):
    assert covered(src, tokenize(SourceUnit.from_text("r.ts", src)))


@given(st.text(max_size=60))
def test_tokenize_covers_arbitrary_text(src):
    assert covered(src, tokenize(SourceUnit.from_text("r.ts", src)))
