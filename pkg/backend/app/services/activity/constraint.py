"""
Parser for the flat constraint grammar::

    constraint := ga ( "<" ga )*
    ga         := ("AND" | "OR") "(" int ("," int)* ")"

Whitespace is ignored; keywords are case-insensitive.
"""

import logging
import re
from pathlib import Path
from typing import List, Optional, Tuple, Union

from app.exceptions import ConstraintSyntaxError
from .model import ActivityKind, ConstraintSpec, GlobalActivitySpec

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"\s*(?:(?P<kw>[A-Za-z]+)|(?P<int>\d+)|(?P<sym>[(),<]))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    stripped_end = len(text.rstrip())
    while pos < stripped_end:
        match = _TOKEN.match(text, pos)
        if not match:
            raise ConstraintSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind)))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _expect(self, kind: str, value: Optional[str] = None):
        tok = self._peek()
        if tok is None:
            raise ConstraintSyntaxError(f"expected {value or kind}, got end of input", len(self.text))
        if tok[0] != kind or (value is not None and tok[1] != value):
            raise ConstraintSyntaxError(f"expected {value or kind}, got {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> ConstraintSpec:
        if not self.tokens:
            raise ConstraintSyntaxError("empty constraint", 0)
        activities = [self._activity(1)]
        while self._peek() is not None:
            self._expect("sym", "<")
            activities.append(self._activity(len(activities) + 1))
        return ConstraintSpec(tuple(activities))

    def _activity(self, ga_id: int) -> GlobalActivitySpec:
        kw = self._expect("kw")
        try:
            kind = ActivityKind(kw[1].upper())
        except ValueError:
            raise ConstraintSyntaxError(f"unknown activity kind {kw[1]!r}", kw[2]) from None
        self._expect("sym", "(")
        tok = self._peek()
        if tok is not None and tok[1] == ")":
            raise ConstraintSyntaxError(f"GA_{ga_id} is empty", tok[2])
        members = [int(self._expect("int")[1])]
        while self._peek() is not None and self._peek()[1] == ",":
            self.i += 1
            members.append(int(self._expect("int")[1]))
        self._expect("sym", ")")
        return GlobalActivitySpec(ga_id=ga_id, kind=kind, members=tuple(members))


def parse_constraint(text: str) -> ConstraintSpec:
    constraint = _Parser(text).parse()
    logger.debug(f"Parsed constraint {constraint.render()} (m={constraint.m}, n={constraint.n})")
    return constraint


def render_constraint(constraint: ConstraintSpec) -> str:
    return constraint.render()


def load_constraint(path: Union[str, Path]) -> ConstraintSpec:
    """Read a constraint from a file; blank lines and ``#`` comments are skipped."""
    lines = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    return parse_constraint(" ".join(lines))
