"""Lexer and recursive-descent parser for the surface syntax of System T.

Grammar (``->`` is right associative, application left associative)::

    type     ::= "nat" | "bool" | type "->" type | "(" type ")"
    atom     ::= NUMLIT | "true" | "false" | IDENT | "(" term ")"
    term     ::= "fun" IDENT ":" type "." term
               | "if" term "then" term "else" term
               | "succ" atom
               | "rec" ["[" type "]"] atom? atom? atom?
               | atom atom*
    file     ::= ("let" IDENT "=" term ";")* term?

``--`` starts a comment that runs to the end of the line.  ``rec`` with fewer
than three arguments elaborates to lambdas around a fully applied core
``Rec``; the result type comes from the zero case, or from ``[type]``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .checker import TypeCheckError, typecheck
from .syntax import (
    BOOL,
    FALSE,
    NAT,
    TRUE,
    App,
    Arrow,
    If,
    Lam,
    Rec,
    Succ,
    Term,
    Type,
    Var,
    numeral,
    shift,
)

KEYWORDS = frozenset(
    {"fun", "if", "then", "else", "succ", "rec", "true", "false", "let", "nat", "bool"}
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>--[^\n]*)
  | (?P<arrow>->)
  | (?P<num>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>[():.=;\[\]])
    """,
    re.VERBOSE,
)


class FrontendError(Exception):
    """Base class for errors carrying a 1-based source position."""

    kind = "error"

    def __init__(self, message: str, line: int, col: int):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {self.kind}: {message}")


class LexError(FrontendError):
    kind = "lex error"


class ParseError(FrontendError):
    kind = "syntax error"


class UnboundIdentifier(FrontendError):
    kind = "unbound identifier"


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "ident", "kw", "sym", "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise LexError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        chunk = m.group()
        col = pos - line_start + 1
        if kind == "ident":
            tokens.append(Token("kw" if chunk in KEYWORDS else "ident", chunk, line, col))
        elif kind == "num":
            tokens.append(Token("num", chunk, line, col))
        elif kind in ("sym", "arrow"):
            tokens.append(Token("sym", chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


@dataclass
class SourceFile:
    """Parsed file: ``let`` definitions (expanded to closed terms) and a main term."""

    definitions: list[tuple[str, Term]] = field(default_factory=list)
    main: Optional[Term] = None

    def lookup(self, name: str) -> Term:
        for def_name, term in self.definitions:
            if def_name == name:
                return term
        raise KeyError(name)

    def names(self) -> list[str]:
        return [name for name, _ in self.definitions]


class _Parser:
    def __init__(self, text: str, defs: Optional[dict[str, Term]] = None):
        self.tokens = tokenize(text)
        self.pos = 0
        self.defs: dict[str, Term] = dict(defs or {})
        # innermost binder last
        self.scope: list[tuple[str, Type]] = []

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.tok
        return tok.kind in ("sym", "kw") and tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def expect_ident(self) -> Token:
        if self.tok.kind != "ident":
            self.fail("expected identifier")
        return self.advance()

    def fail(self, message: str):
        tok = self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"{message}, found {found}", tok.line, tok.col)

    def starts_atom(self) -> bool:
        tok = self.tok
        if tok.kind in ("num", "ident"):
            return True
        return tok.kind in ("kw", "sym") and tok.text in ("true", "false", "(")

    # types

    def parse_type(self) -> Type:
        left = self.parse_type_atom()
        if self.at("->"):
            self.advance()
            return Arrow(left, self.parse_type())
        return left

    def parse_type_atom(self) -> Type:
        if self.at("nat"):
            self.advance()
            return NAT
        if self.at("bool"):
            self.advance()
            return BOOL
        if self.at("("):
            self.advance()
            ty = self.parse_type()
            self.expect(")")
            return ty
        self.fail("expected type")

    # terms

    def parse_term(self) -> Term:
        if self.at("fun"):
            self.advance()
            name = self.expect_ident().text
            self.expect(":")
            ty = self.parse_type()
            self.expect(".")
            self.scope.append((name, ty))
            try:
                body = self.parse_term()
            finally:
                self.scope.pop()
            return Lam(ty, body)
        if self.at("if"):
            self.advance()
            cond = self.parse_term()
            self.expect("then")
            then_branch = self.parse_term()
            self.expect("else")
            else_branch = self.parse_term()
            return If(cond, then_branch, else_branch)
        if self.at("succ"):
            self.advance()
            # `succ (succ (... x))` is read in a loop so long chains don't recurse
            count, opened = 1, 0
            while self.at("(") and self.tokens[self.pos + 1].text == "succ" \
                    and self.tokens[self.pos + 1].kind == "kw":
                self.pos += 2
                count += 1
                opened += 1
            if not self.starts_atom():
                self.fail("expected argument of succ")
            term = self.parse_atom()
            for _ in range(opened):
                self.expect(")")
            for _ in range(count):
                term = Succ(term)
            return term
        if self.at("rec"):
            return self.parse_rec()
        if not self.starts_atom():
            self.fail("expected term")
        term = self.parse_atom()
        while self.starts_atom():
            term = App(term, self.parse_atom())
        return term

    def parse_rec(self) -> Term:
        rec_tok = self.advance()
        instance: Optional[Type] = None
        if self.at("["):
            self.advance()
            instance = self.parse_type()
            self.expect("]")
        args: list[tuple[Term, Token]] = []
        while len(args) < 3 and self.starts_atom():
            start = self.tok
            args.append((self.parse_atom(), start))
        if args:
            zero_case, zero_tok = args[0]
            if instance is not None or len(args) < 3:
                try:
                    sigma = typecheck(zero_case, [ty for _, ty in reversed(self.scope)])
                except TypeCheckError as exc:
                    raise ParseError(
                        f"cannot type rec zero case: {exc}", zero_tok.line, zero_tok.col
                    ) from None
                if instance is not None and sigma != instance:
                    raise ParseError(
                        f"rec instance {instance} does not match zero case type {sigma}",
                        zero_tok.line,
                        zero_tok.col,
                    )
                instance = sigma
        elif instance is None:
            raise ParseError(
                "bare rec needs an instance type, e.g. rec [nat]", rec_tok.line, rec_tok.col
            )
        return elaborate_rec(instance, [term for term, _ in args])

    def parse_atom(self) -> Term:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return numeral(int(tok.text))
        if self.at("true"):
            self.advance()
            return TRUE
        if self.at("false"):
            self.advance()
            return FALSE
        if tok.kind == "ident":
            self.advance()
            return self.resolve(tok)
        if self.at("("):
            self.advance()
            term = self.parse_term()
            self.expect(")")
            return term
        self.fail("expected atom")

    def resolve(self, tok: Token) -> Term:
        for depth, (name, _) in enumerate(reversed(self.scope)):
            if name == tok.text:
                return Var(depth)
        if tok.text in self.defs:
            return self.defs[tok.text]
        raise UnboundIdentifier(tok.text, tok.line, tok.col)

    # files

    def parse_file(self) -> SourceFile:
        source = SourceFile()
        while self.at("let"):
            self.advance()
            name_tok = self.expect_ident()
            if name_tok.text in self.defs:
                raise ParseError(
                    f"duplicate definition {name_tok.text!r}", name_tok.line, name_tok.col
                )
            self.expect("=")
            term = self.parse_term()
            self.expect(";")
            self.defs[name_tok.text] = term
            source.definitions.append((name_tok.text, term))
        if self.tok.kind != "eof":
            source.main = self.parse_term()
        if self.tok.kind != "eof":
            self.fail("expected end of input")
        return source


def elaborate_rec(instance: Optional[Type], args: list[Term]) -> Term:
    """Wrap a partially applied recursor in lambdas around a core ``Rec``."""
    missing = 3 - len(args)
    if missing == 0:
        return Rec(*args)
    step_ty = Arrow(NAT, Arrow(instance, instance))
    binder_types = [instance, step_ty, NAT][len(args):]
    lifted = [shift(arg, missing) for arg in args]
    fresh = [Var(i) for i in reversed(range(missing))]
    term: Term = Rec(*(lifted + fresh))
    for ty in reversed(binder_types):
        term = Lam(ty, term)
    return term


def parse(text: str, defs: Optional[dict[str, Term]] = None) -> SourceFile:
    """Parse a whole source file.

    ``defs`` pre-binds names (e.g. the prelude) as closed terms that ``let``
    definitions and the main term may reference.
    """
    return _Parser(text, defs).parse_file()


def parse_term(text: str, defs: Optional[dict[str, Term]] = None) -> Term:
    parser = _Parser(text, defs)
    term = parser.parse_term()
    if parser.tok.kind != "eof":
        parser.fail("expected end of input")
    return term


def parse_type(text: str) -> Type:
    parser = _Parser(text)
    ty = parser.parse_type()
    if parser.tok.kind != "eof":
        parser.fail("expected end of input")
    return ty
