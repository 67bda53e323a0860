"""Problem-file grammar: declarations plus equations.

::

    # comment
    types:  T
    consts: a:T  b:T  f:T->T
    vars:   x:T->(T->T)->T
    locals: w:T
    solve:
    \\a:T. (x a \\z:T.z) = \\a:T. a

Types are right-associative arrows over declared atoms; terms are
backslash-abstractions and parenthesized left-associative application
spines.  Identifiers starting with an underscore are reserved.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterator

from .core import (
    Arrow,
    Atom,
    Kind,
    Lam,
    Signature,
    Symbol,
    Term,
    Type,
    Var,
    App,
    local,
    spine,
    strip_lams,
    free_vars,
)
from .matching import Equation, MatchingProblem


class ParseError(Exception):
    def __init__(self, line: int, col: int, message: str):
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"line {line}, column {col}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str  # ident | punct | end
    text: str
    line: int
    col: int


_PUNCT = ("->", "\\", ":", ".", "(", ")", "=")
_IDENT_START = set(string.ascii_letters)
_IDENT_CONT = set(string.ascii_letters + string.digits + "_'")


def _tokenize(text: str, line_no: int) -> list[Token]:
    out: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "#":
            break
        if ch.isspace():
            i += 1
            continue
        if text.startswith("->", i):
            out.append(Token("punct", "->", line_no, i + 1))
            i += 2
            continue
        if ch in "\\:.()=":
            out.append(Token("punct", ch, line_no, i + 1))
            i += 1
            continue
        if ch == "_":
            raise ParseError(line_no, i + 1, "identifiers starting with '_' are reserved")
        if ch in _IDENT_START:
            j = i + 1
            while j < n and text[j] in _IDENT_CONT:
                j += 1
            out.append(Token("ident", text[i:j], line_no, i + 1))
            i = j
            continue
        raise ParseError(line_no, i + 1, f"unexpected character {ch!r}")
    return out


class _Cursor:
    def __init__(self, tokens: list[Token], line_no: int, line_len: int):
        self.tokens = tokens
        self.pos = 0
        self.line_no = line_no
        self.line_len = line_len

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self, expected: str) -> Token:
        t = self.peek()
        if t is None:
            raise ParseError(self.line_no, self.line_len + 1, f"expected {expected}")
        self.pos += 1
        return t

    def expect_punct(self, text: str) -> Token:
        t = self.next(repr(text))
        if t.kind != "punct" or t.text != text:
            raise ParseError(t.line, t.col, f"expected {text!r}, found {t.text!r}")
        return t

    def expect_ident(self, what: str = "identifier") -> Token:
        t = self.next(what)
        if t.kind != "ident":
            raise ParseError(t.line, t.col, f"expected {what}, found {t.text!r}")
        return t

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)


def _parse_type(cur: _Cursor, atoms: dict[str, Atom]) -> Type:
    left = _parse_type_atom(cur, atoms)
    t = cur.peek()
    if t is not None and t.kind == "punct" and t.text == "->":
        cur.pos += 1
        return Arrow(left, _parse_type(cur, atoms))
    return left


def _parse_type_atom(cur: _Cursor, atoms: dict[str, Atom]) -> Type:
    t = cur.next("a type")
    if t.kind == "ident":
        if t.text not in atoms:
            raise ParseError(t.line, t.col, f"undeclared atomic type {t.text!r}")
        return atoms[t.text]
    if t.kind == "punct" and t.text == "(":
        inner = _parse_type(cur, atoms)
        cur.expect_punct(")")
        return inner
    raise ParseError(t.line, t.col, f"expected a type, found {t.text!r}")


def _parse_term(cur: _Cursor, atoms, symbols: dict[str, Symbol], scope: dict[str, Symbol]) -> Term:
    t = cur.peek()
    if t is None:
        raise ParseError(cur.line_no, cur.line_len + 1, "expected a term")
    if t.kind == "punct" and t.text == "\\":
        cur.pos += 1
        name_tok = cur.expect_ident("binder name")
        if name_tok.text in symbols:
            raise ParseError(
                name_tok.line, name_tok.col,
                f"binder {name_tok.text!r} shadows a declared symbol",
            )
        cur.expect_punct(":")
        ty = _parse_type(cur, atoms)
        cur.expect_punct(".")
        binder = local(name_tok.text, ty)
        body = _parse_term(cur, atoms, symbols, {**scope, binder.name: binder})
        return Lam(binder, body)
    return _parse_primary(cur, atoms, symbols, scope)


def _parse_primary(cur, atoms, symbols, scope) -> Term:
    t = cur.next("a term")
    if t.kind == "ident":
        sym = scope.get(t.text) or symbols.get(t.text)
        if sym is None:
            raise ParseError(t.line, t.col, f"undeclared identifier {t.text!r}")
        return Var(sym)
    if t.kind == "punct" and t.text == "(":
        first = _parse_term(cur, atoms, symbols, scope)
        terms = [first]
        while True:
            nxt = cur.peek()
            if nxt is None:
                raise ParseError(cur.line_no, cur.line_len + 1, "expected ')'")
            if nxt.kind == "punct" and nxt.text == ")":
                cur.pos += 1
                break
            terms.append(_parse_term(cur, atoms, symbols, scope))
        out = terms[0]
        for arg in terms[1:]:
            out = App(out, arg)
        return out
    raise ParseError(t.line, t.col, f"expected a term, found {t.text!r}")


_SECTIONS = ("types", "consts", "vars", "locals", "solve")


def parse_problem(text: str) -> MatchingProblem:
    """Parse a problem file; the result is unvalidated (call validate next)."""
    atoms: dict[str, Atom] = {}
    symbols: dict[str, Symbol] = {}
    equations: list[Equation] = []
    section: str | None = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(raw, line_no)
        if not tokens:
            continue
        head = tokens[0]
        if (
            head.kind == "ident"
            and head.text in _SECTIONS
            and len(tokens) >= 2
            and tokens[1].kind == "punct"
            and tokens[1].text == ":"
        ):
            section = head.text
            tokens = tokens[2:]
            if not tokens:
                continue
        if section is None:
            raise ParseError(head.line, head.col, "expected a section header such as 'types:'")
        cur = _Cursor(tokens, line_no, len(raw))
        if section == "types":
            while not cur.at_end():
                t = cur.expect_ident("atomic type name")
                if t.text in atoms:
                    raise ParseError(t.line, t.col, f"atomic type {t.text!r} declared twice")
                atoms[t.text] = Atom(t.text)
        elif section in ("consts", "vars", "locals"):
            kind = {
                "consts": Kind.CONSTANT,
                "vars": Kind.INSTANTIABLE,
                "locals": Kind.LOCAL,
            }[section]
            while not cur.at_end():
                name_tok = cur.expect_ident("symbol name")
                if name_tok.text in symbols or name_tok.text in atoms:
                    raise ParseError(
                        name_tok.line, name_tok.col, f"{name_tok.text!r} declared twice"
                    )
                cur.expect_punct(":")
                ty = _parse_type(cur, atoms)
                symbols[name_tok.text] = Symbol(name_tok.text, kind, ty)
        elif section == "solve":
            lhs = _parse_term(cur, atoms, symbols, {})
            cur.expect_punct("=")
            rhs = _parse_term(cur, atoms, symbols, {})
            if not cur.at_end():
                t = cur.peek()
                raise ParseError(t.line, t.col, f"unexpected {t.text!r} after equation")
            equations.append(Equation(lhs, rhs))
    sig = Signature(
        frozenset(atoms.values()),
        tuple(s for s in symbols.values() if s.kind is Kind.CONSTANT),
        tuple(s for s in symbols.values() if s.kind is Kind.INSTANTIABLE),
        tuple(s for s in symbols.values() if s.kind is Kind.LOCAL),
    )
    return MatchingProblem(sig, tuple(equations))


def parse_term(text: str, symbols: dict[str, Symbol]) -> Term:
    """Parse a single term against a symbol table (used for round trips)."""
    atoms: dict[str, Atom] = {}
    for s in symbols.values():
        for a in _atoms_of(s.ty):
            atoms[a.name] = a
    tokens = _tokenize(text, 1)
    cur = _Cursor(tokens, 1, len(text))
    t = _parse_term(cur, atoms, symbols, {})
    if not cur.at_end():
        tok = cur.peek()
        raise ParseError(tok.line, tok.col, f"unexpected {tok.text!r} after term")
    return t


def _atoms_of(ty: Type) -> Iterator[Atom]:
    if isinstance(ty, Atom):
        yield ty
    else:
        yield from _atoms_of(ty.dom)
        yield from _atoms_of(ty.cod)


# ---------------------------------------------------------------------------
# Printing


_BINDER_NAMES = tuple("uvwxyz") + tuple(f"u{i}" for i in range(1, 1000))


def format_type(ty: Type) -> str:
    return str(ty)


def format_term(t: Term, avoid: set[str] | None = None) -> str:
    """Render a term in the input grammar, renaming reserved binder names."""
    avoid = set(avoid or ()) | {s.name for s in free_vars(t)}
    supply = iter(n for n in _BINDER_NAMES if n not in avoid)

    def ren(sym: Symbol, env: dict[Symbol, Symbol]) -> Symbol:
        if not sym.name.startswith("_"):
            return sym
        fresh = local(next(supply), sym.ty)
        return fresh

    def go(t: Term, env: dict[Symbol, Symbol], top: bool) -> str:
        if isinstance(t, Var):
            return env.get(t.sym, t.sym).name
        if isinstance(t, Lam):
            nb = ren(t.binder, env)
            body = go(t.body, {**env, t.binder: nb}, True)
            return f"\\{nb.name}:{format_type(nb.ty)}. {body}"
        head, args = spine(t)
        parts = [go(head, env, False)] + [go(a, env, False) for a in args]
        return "(" + " ".join(parts) + ")"

    return go(t, {}, True)
