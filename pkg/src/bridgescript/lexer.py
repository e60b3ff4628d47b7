"""Tokenizer for the scripting language.

One master regex with named groups; alternatives are ordered so that
multi-character operators win over their prefixes and comments win over
the minus operator.
"""

import re

from .errors import LexError

IDENT = "ident"
NUMBER = "number"
STRING = "string"
KEYWORD = "keyword"
OP = "op"
PUNCT = "punct"

KEYWORDS = {
    "and", "do", "else", "elseif", "end", "false", "for", "function",
    "if", "local", "nil", "not", "or", "return", "then", "true", "while",
}

TOKEN_SPEC = [
    ("NEWLINE", r"\n"),
    ("SKIP", r"[ \t\r]+"),
    ("COMMENT", r"--[^\n]*"),
    ("NUMBER", r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?"),
    ("STRING", r"\"(?:\\.|[^\"\\\n])*\"|'(?:\\.|[^'\\\n])*'"),
    ("UNTERMINATED", r"\"(?:\\.|[^\"\\\n])*|'(?:\\.|[^'\\\n])*"),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("OP", r"==|~=|<=|>=|\.\.|[+\-*/<>=]"),
    ("PUNCT", r"[(){}\[\],;:.]"),
    ("MISMATCH", r"."),
]

_MASTER = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in TOKEN_SPEC))


class Token:
    __slots__ = ("kind", "lexeme", "line")

    def __init__(self, kind: str, lexeme: str, line: int):
        self.kind = kind
        self.lexeme = lexeme
        self.line = line

    def __repr__(self) -> str:
        return f"Token({self.kind}, {self.lexeme!r}, line {self.line})"


def tokenize(source: str) -> list[Token]:
    """Lex source into a token list. Comments and whitespace are skipped.

    Raises LexError on illegal characters and unterminated strings.
    String and number tokens keep their raw lexeme; decoding happens in
    the parser.
    """
    tokens: list[Token] = []
    line = 1
    for m in _MASTER.finditer(source):
        group = m.lastgroup
        text = m.group()
        if group == "NEWLINE":
            line += 1
        elif group == "SKIP" or group == "COMMENT":
            continue
        elif group == "NUMBER":
            tokens.append(Token(NUMBER, text, line))
        elif group == "STRING":
            tokens.append(Token(STRING, text, line))
        elif group == "IDENT":
            kind = KEYWORD if text in KEYWORDS else IDENT
            tokens.append(Token(kind, text, line))
        elif group == "OP":
            tokens.append(Token(OP, text, line))
        elif group == "PUNCT":
            tokens.append(Token(PUNCT, text, line))
        elif group == "UNTERMINATED":
            raise LexError("unterminated string", line)
        else:
            raise LexError(f"illegal character {text!r}", line)
    return tokens
