# ♥♥─── Catdl Ontology Parser ──────────────────────────────
"""Reader and printer for the ontology text format.

::

    concepts A B C            # optional declarations
    roles R S
    A <= (some R (and B C))   # GCI
    R <= S                    # RI
    trans S                   # ITR
    a : (only R B)            # CAA
    (a, b) : R                # RAA

A bare ``X <= Y`` between two names is a role inclusion unless one of the names is known as a concept,
from a declaration or from its use elsewhere in the file.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .terms import RawOp, RawConcept, ConceptTerm, TermFactory, role_names, concept_names
from .errors import MalformedTermError, OntologyParseError
from .ontology import CAA, GCI, ITR, RAA, RI, Axiom, Ontology


TOKEN_PATTERN = re.compile(
    r"(?P<space>[ \t\r]+)|(?P<newline>\n)|(?P<comment>#[^\n]*)|(?P<arrow><=)"
    r"|(?P<punct>[():,{}])|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
)
CONSTRUCTORS = {"and": RawOp.AND, "or": RawOp.OR, "not": RawOp.NOT, "some": RawOp.SOME, "only": RawOp.ONLY}
CONSTANTS = {"Top": RawOp.TOP, "Bot": RawOp.BOT}


# ─── Tokens ────────────────────────────────────────────────────────────────────
@dataclass(frozen=True, slots=True)
class Token:
    """A lexeme with its 1-based source position."""

    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens, dropping blanks and comments."""
    tokens: list[Token] = []
    line, line_start, index = 1, 0, 0
    while index < len(text):
        match = TOKEN_PATTERN.match(text, index)
        column = index - line_start + 1
        if match is None:
            char = text[index]
            msg = "unknown escape in identifier" if char == "\\" else f"unexpected character {char!r}"
            raise OntologyParseError(msg, line, column)
        kind = match.lastgroup or ""
        if kind == "newline":
            line += 1
            line_start = match.end()
        elif kind not in {"space", "comment"}:
            tokens.append(Token(kind, match.group(), line, column))
        index = match.end()
    return tokens


# ─── Parser ────────────────────────────────────────────────────────────────────
@dataclass
class _Pending:
    """Name-to-name inclusion whose reading (GCI or RI) is decided after the whole file is read."""

    lhs: Token
    rhs: Token
    position: int


class OntologyParser:
    """Recursive-descent parser over a token list."""

    def __init__(self, text: str, terms: TermFactory | None = None) -> None:
        self.terms = terms or TermFactory()
        self.tokens = tokenize(text)
        self.index = 0
        self._end_line = text.count("\n") + 1

    # ─── Cursor ────────────────────────────────────────────────────────────────
    def _peek(self, offset: int = 0) -> Token | None:
        position = self.index + offset
        return self.tokens[position] if position < len(self.tokens) else None

    def _error(self, message: str, token: Token | None = None) -> OntologyParseError:
        token = token or self._peek()
        if token is None:
            return OntologyParseError(f"{message}, found end of input", self._end_line, 1)
        return OntologyParseError(f"{message}, found {token.text!r}", token.line, token.column)

    def _next(self, description: str) -> Token:
        token = self._peek()
        if token is None:
            raise self._error(f"expected {description}")
        self.index += 1
        return token

    def _expect(self, text: str) -> Token:
        token = self._peek()
        if token is None or token.text != text:
            raise self._error(f"expected {text!r}")
        self.index += 1
        return token

    def _name(self, description: str) -> Token:
        token = self._peek()
        if token is None or token.kind != "name":
            raise self._error(f"expected {description}")
        self.index += 1
        return token

    def _at(self, offset: int, text: str) -> bool:
        token = self._peek(offset)
        return token is not None and token.text == text

    # ─── Concepts ──────────────────────────────────────────────────────────────
    def parse_raw_concept(self) -> RawConcept:
        token = self._next("a concept")
        if token.text == "{":
            raise OntologyParseError("nominals are not allowed inside concepts", token.line, token.column)
        if token.kind == "name":
            if token.text in CONSTANTS:
                return RawConcept(CONSTANTS[token.text])
            return RawConcept(RawOp.ATOM, name=token.text)
        if token.text != "(":
            raise self._error("expected a concept", token)
        head = self._name("a constructor")
        op = CONSTRUCTORS.get(head.text)
        if op is None:
            raise self._error("unknown constructor", head)
        role = ""
        if op in {RawOp.SOME, RawOp.ONLY}:
            role = self._name("a role name").text
        args: list[RawConcept] = []
        while not self._at(0, ")"):
            if self._peek() is None:
                raise self._error("expected ')'")
            args.append(self.parse_raw_concept())
        self._expect(")")
        expected = {RawOp.NOT: (1, 1), RawOp.SOME: (1, 1), RawOp.ONLY: (1, 1)}.get(op, (2, None))
        low, high = expected
        if len(args) < low or (high is not None and len(args) > high):
            if op in {RawOp.AND, RawOp.OR} and not args:
                msg = f"empty '{op.value}' expression"
            else:
                msg = f"wrong number of operands for '{op.value}'"
            raise OntologyParseError(msg, head.line, head.column)
        return RawConcept(op, role=role, args=tuple(args))

    def parse_concept(self) -> ConceptTerm:
        start = self._peek()
        raw = self.parse_raw_concept()
        try:
            return self.terms.canonicalize(raw)
        except MalformedTermError as exc:
            line, column = (start.line, start.column) if start else (self._end_line, 1)
            raise OntologyParseError(str(exc), line, column) from exc

    # ─── Axioms ────────────────────────────────────────────────────────────────
    def parse_ontology(self) -> Ontology:
        """Parse the whole token stream into an ontology."""
        axioms: list[Axiom | None] = []
        pending: list[_Pending] = []
        concepts: set[str] = set()
        roles: set[str] = set()
        while self._peek() is not None:
            token = self._peek()
            assert token is not None
            if token.kind == "name" and token.text in {"concepts", "roles"} and self._declares():
                self._declaration(concepts if token.text == "concepts" else roles)
            elif token.text == "trans" and (nxt := self._peek(1)) is not None and nxt.kind == "name":
                self.index += 1
                role = self._name("a role name").text
                roles.add(role)
                axioms.append(ITR(self.terms.role(role)))
            elif token.text == "(" and self._at(2, ","):
                axioms.append(self._role_assertion(roles))
            elif token.kind == "name" and self._at(1, ":"):
                self.index += 2
                axioms.append(CAA(token.text, self._concept_noting(concepts, roles)))
            elif (
                token.kind == "name"
                and token.text not in CONSTANTS
                and self._at(1, "<=")
                and self._is_plain_name(2)
            ):
                rhs = self._peek(2)
                assert rhs is not None
                self.index += 3
                pending.append(_Pending(token, rhs, len(axioms)))
                axioms.append(None)
            else:
                lhs = self._concept_noting(concepts, roles)
                self._expect("<=")
                axioms.append(GCI(lhs, self._concept_noting(concepts, roles)))
        self._resolve(pending, axioms, concepts, roles)
        return Ontology.build(self.terms, [a for a in axioms if a is not None], concepts, roles)

    def _declares(self) -> bool:
        """A declaration keyword is followed by names on the same line, not by an axiom operator."""
        keyword, nxt = self._peek(), self._peek(1)
        assert keyword is not None
        return nxt is None or nxt.line != keyword.line or (nxt.kind == "name" and not self._at(2, "<="))

    def _declaration(self, into: set[str]) -> None:
        keyword = self._next("a declaration")
        while (token := self._peek()) is not None and token.line == keyword.line and token.kind == "name":
            into.add(token.text)
            self.index += 1

    def _is_plain_name(self, offset: int) -> bool:
        token, after = self._peek(offset), self._peek(offset + 1)
        if token is None or token.kind != "name" or token.text in CONSTANTS:
            return False
        # a name followed by ":" on the same line starts an assertion
        return after is None or after.text != ":" or after.line != token.line

    def _role_assertion(self, roles: set[str]) -> RAA:
        self._expect("(")
        a = self._name("an individual").text
        self._expect(",")
        b = self._name("an individual").text
        self._expect(")")
        self._expect(":")
        role = self._name("a role name").text
        roles.add(role)
        return RAA(a, b, self.terms.role(role))

    def _concept_noting(self, concepts: set[str], roles: set[str]) -> ConceptTerm:
        concept = self.parse_concept()
        concepts |= concept_names(concept)
        roles |= role_names(concept)
        return concept

    def _resolve(
        self,
        pending: list[_Pending],
        axioms: list[Axiom | None],
        concepts: set[str],
        roles: set[str],
    ) -> None:
        """Decide each name-to-name inclusion, propagating concept-hood through chains of GCIs."""
        undecided = list(pending)
        changed = True
        while changed:
            changed = False
            for item in list(undecided):
                names = {item.lhs.text, item.rhs.text}
                if names & concepts and not names <= roles:
                    concepts |= names
                    axioms[item.position] = GCI(self.terms.atom(item.lhs.text), self.terms.atom(item.rhs.text))
                    undecided.remove(item)
                    changed = True
        for item in undecided:
            names = {item.lhs.text, item.rhs.text}
            if names & concepts:
                msg = f"cannot tell whether '{item.lhs.text} <= {item.rhs.text}' relates concepts or roles"
                raise OntologyParseError(msg, item.lhs.line, item.lhs.column)
            roles |= names
            axioms[item.position] = RI(self.terms.role(item.lhs.text), self.terms.role(item.rhs.text))


# ─── Entry points ──────────────────────────────────────────────────────────────
def parse_ontology(text: str, terms: TermFactory | None = None) -> Ontology:
    """Parse an ontology; a fresh term factory is created unless one is given."""
    return OntologyParser(text, terms).parse_ontology()


def parse_concept(text: str, terms: TermFactory) -> ConceptTerm:
    parser = OntologyParser(text, terms)
    concept = parser.parse_concept()
    if parser._peek() is not None:  # noqa: SLF001
        raise parser._error("expected end of concept")  # noqa: SLF001
    return concept


def parse_inclusion(text: str, terms: TermFactory) -> tuple[ConceptTerm, ConceptTerm]:
    """Parse a query of the form ``C <= D``."""
    parser = OntologyParser(text, terms)
    lhs = parser.parse_concept()
    parser._expect("<=")  # noqa: SLF001
    rhs = parser.parse_concept()
    if parser._peek() is not None:  # noqa: SLF001
        raise parser._error("expected end of query")  # noqa: SLF001
    return lhs, rhs


# ─── Printer ───────────────────────────────────────────────────────────────────
def render_axiom(axiom: Axiom) -> str:
    match axiom:
        case GCI(lhs, rhs):
            return f"{lhs} <= {rhs}"
        case RI(sub, sup):
            return f"{sub} <= {sup}"
        case ITR(role):
            return f"trans {role}"
        case CAA(individual, concept):
            return f"{individual} : {concept}"
        case RAA(a, b, role):
            return f"({a}, {b}) : {role}"


def print_ontology(o: Ontology, *, declarations: bool = True) -> str:
    """Serialize ``o`` so that parsing the text gives back an equal ontology."""
    lines: list[str] = []
    if declarations and o.concept_names:
        lines.append("concepts " + " ".join(sorted(o.concept_names)))
    if declarations and o.role_names:
        lines.append("roles " + " ".join(sorted(o.role_names)))
    lines += [render_axiom(axiom) for axiom in o.axioms]
    return "".join(f"{line}\n" for line in lines)


def token_count(o: Ontology) -> int:
    """Size of ``o`` as the number of tokens of its serialized axioms."""
    return len(tokenize(print_ontology(o, declarations=False)))
