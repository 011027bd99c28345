"""Reader and printer for the knowledge-base file format.

::

    % comment
    const alice, bob.
    ontology:
      a & (b -> c) & ~f.
    rules:
      K b <- K a.
      K d <- K c, not e.
      e <- not d.          % the K before a head may be omitted
      K i.                 % a fact; same as  K i <- .

Formulas use ``~ & | ->`` (tightest first; ``->`` associates to the right)
and the constants ``true``/``false``. Identifiers starting with a capital
letter are variables; ``K`` and ``not`` are reserved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .kb import Atom, KnowledgeBase, Rule, ground
from .ontology import And, Const, Formula, Implies, Not, Or, Var


class KBSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>%[^\n]*)"
    r"|(?P<larrow><-)|(?P<rarrow>->)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9_]*|[0-9]+)"
    r"|(?P<punct>[(),.:~&|])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident, punct, arrow or eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise KBSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            if kind in ("larrow", "rarrow"):
                kind = "punct"
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        newlines = m.group().count("\n")
        if newlines:
            line += newlines
            line_start = pos + m.group().rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.constants: list[str] = []
        self.formulas: list[Formula] = []
        self.rules: list[Rule] = []
        self.arity: dict[str, int] = {}
        self.seen_sections: set[str] = set()

    # -- token helpers --------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def error(self, message: str, tok: Token | None = None) -> KBSyntaxError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return KBSyntaxError(f"{message} (found {found})", tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.kind != "eof" and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        tok = self.tok
        self.i += 1
        return tok

    # -- top level --------------------------------------------------------

    def parse(self) -> KnowledgeBase:
        section = None
        while self.tok.kind != "eof":
            tok = self.tok
            if tok.text in ("ontology", "rules") and self.peek().text == ":":
                if tok.text in self.seen_sections:
                    raise self.error(f"duplicate section '{tok.text}:'")
                self.seen_sections.add(tok.text)
                section = tok.text
                self.i += 2
            elif tok.text == "const" and self.peek().kind == "ident":
                self.i += 1
                self.const_decl()
            elif section == "ontology":
                self.formulas.append(self.implication())
                self.expect(".")
            elif section == "rules":
                self.rules.append(self.rule())
            else:
                raise self.error("expected 'const', 'ontology:' or 'rules:'")
        return KnowledgeBase(tuple(self.formulas), tuple(self.rules), tuple(self.constants))

    def const_decl(self):
        while True:
            tok = self.tok
            name = self.constant()
            if name in self.constants:
                raise self.error(f"duplicate constant declaration '{name}'", tok)
            self.constants.append(name)
            if self.at(","):
                self.i += 1
                continue
            self.expect(".")
            return

    def constant(self) -> str:
        tok = self.tok
        if tok.kind != "ident" or tok.text[0].isupper():
            raise self.error("expected a constant")
        self.i += 1
        return tok.text

    # -- atoms ------------------------------------------------------------

    def atom(self, ground_only: bool = False) -> Atom:
        tok = self.tok
        if tok.kind != "ident" or not tok.text[0].islower() or tok.text in ("not", "true", "false"):
            raise self.error("expected an atom")
        self.i += 1
        args: list[str] = []
        if self.at("("):
            self.i += 1
            while True:
                arg = self.tok
                if arg.kind != "ident":
                    raise self.error("expected a term")
                if ground_only and arg.text[0].isupper():
                    raise self.error("ontology atoms must be ground")
                args.append(arg.text)
                self.i += 1
                if self.at(","):
                    self.i += 1
                    continue
                self.expect(")")
                break
        known = self.arity.setdefault(tok.text, len(args))
        if known != len(args):
            raise self.error(f"predicate '{tok.text}' used with arity {len(args)} and {known}", tok)
        return Atom(tok.text, tuple(args))

    # -- formulas ---------------------------------------------------------

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.at("->"):
            self.i += 1
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        parts = [self.conjunction()]
        while self.at("|"):
            self.i += 1
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction(self) -> Formula:
        parts = [self.unary()]
        while self.at("&"):
            self.i += 1
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Formula:
        if self.at("~"):
            self.i += 1
            return Not(self.unary())
        if self.at("("):
            self.i += 1
            inner = self.implication()
            self.expect(")")
            return inner
        if self.at("true") or self.at("false"):
            value = self.tok.text == "true"
            self.i += 1
            return Const(value)
        return Var(self.atom(ground_only=True).name)

    # -- rules ------------------------------------------------------------

    def rule(self) -> Rule:
        if self.at("K"):
            self.i += 1
        head = self.atom()
        pos: list[Atom] = []
        neg: list[Atom] = []
        if self.at("<-"):
            self.i += 1
            if not self.at("."):
                while True:
                    if self.at("K"):
                        self.i += 1
                        pos.append(self.atom())
                    elif self.at("not"):
                        self.i += 1
                        neg.append(self.atom())
                    else:
                        raise self.error("expected 'K atom' or 'not atom' in rule body")
                    if self.at(","):
                        self.i += 1
                        continue
                    break
        self.expect(".")
        return Rule(head, tuple(pos), tuple(neg))


def parse_kb(text: str) -> KnowledgeBase:
    """Parse a knowledge base (rules may still contain variables)."""
    return _Parser(text).parse()


def load_kb(path: str | Path) -> KnowledgeBase:
    """Read, parse and ground a knowledge-base file."""
    return ground(parse_kb(Path(path).read_text()))


def format_kb(kb: KnowledgeBase) -> str:
    """Text that :func:`parse_kb` reads back to an equal knowledge base."""
    lines = []
    if kb.constants:
        lines.append(f"const {', '.join(kb.constants)}.")
    lines.append("ontology:")
    lines.extend(f"  {f}." for f in kb.ontology)
    lines.append("rules:")
    lines.extend(f"  {r}" for r in kb.rules)
    return "\n".join(lines) + "\n"
