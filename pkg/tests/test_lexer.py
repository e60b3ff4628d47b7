"""Token-level checks: kinds, line tracking, comments, strings."""

import pytest

from bridgescript.errors import LexError
from bridgescript.lexer import (
    IDENT,
    KEYWORD,
    NUMBER,
    OP,
    PUNCT,
    STRING,
    tokenize,
)


def kinds(src):
    return [(t.kind, t.lexeme) for t in tokenize(src)]


def test_point_fragment():
    assert kinds("point = {x=0, y=0}") == [
        (IDENT, "point"), (OP, "="), (PUNCT, "{"),
        (IDENT, "x"), (OP, "="), (NUMBER, "0"), (PUNCT, ","),
        (IDENT, "y"), (OP, "="), (NUMBER, "0"), (PUNCT, "}"),
    ]


def test_keywords_and_idents():
    assert kinds("while x do end")[0][0] == KEYWORD
    assert kinds("whilex")[0] == (IDENT, "whilex")
    assert kinds("_f2")[0] == (IDENT, "_f2")


def test_numbers():
    assert [k for k, _ in kinds("0 42 2.5 1e3 2.5E-2")] == [NUMBER] * 5


def test_strings_keep_raw_lexeme():
    toks = tokenize("'a' \"b\\\"c\"")
    assert [t.kind for t in toks] == [STRING, STRING]
    assert toks[0].lexeme == "'a'"
    assert toks[1].lexeme == '"b\\"c"'


def test_multichar_operators_win():
    assert [l for _, l in kinds("== ~= <= >= .. = < .")] == \
        ["==", "~=", "<=", ">=", "..", "=", "<", "."]


def test_colon_and_call_punctuation():
    assert kinds("p:move(2,3)") == [
        (IDENT, "p"), (PUNCT, ":"), (IDENT, "move"), (PUNCT, "("),
        (NUMBER, "2"), (PUNCT, ","), (NUMBER, "3"), (PUNCT, ")"),
    ]


def test_comments_skipped():
    toks = tokenize("a -- trailing\n-- whole line\nb")
    assert [(t.lexeme, t.line) for t in toks] == [("a", 1), ("b", 3)]


def test_line_numbers():
    toks = tokenize("a\nb\n\nc")
    assert [t.line for t in toks] == [1, 2, 4]


def test_unterminated_string():
    with pytest.raises(LexError) as e:
        tokenize("x = 'open\n")
    assert "unterminated" in str(e.value)


def test_illegal_character():
    with pytest.raises(LexError) as e:
        tokenize("a\n@")
    assert "@" in str(e.value) and e.value.line == 2


def test_empty_source():
    assert tokenize("") == []
    assert tokenize("  -- only a comment\n") == []
