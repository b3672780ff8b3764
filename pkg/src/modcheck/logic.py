"""FOL/MSOL/CMSOL formulas with counting, distance, and disjoint-path atoms.

The evaluator is exact and works by direct recursion: first-order
quantifiers range over the universe, set quantifiers over all subsets
(guarded by a configurable cap), distance atoms use hop distance in the
Gaifman graph, and the disjoint-path atoms do an exhaustive search for
pairwise fully vertex-disjoint connecting paths of length at least two.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .core import LimitExceeded, Structure

SET_QUANTIFIER_CAP = 16


class SyntaxIssue(ValueError):
    """Parse error with position information."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class EvaluationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


Term = Union[Var, Const]


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Rel:
    symbol: str
    terms: tuple[Term, ...]


@dataclass(frozen=True)
class InSet:
    term: Term
    setvar: str


@dataclass(frozen=True)
class Card:
    setvar: str
    modulus: int

    def __post_init__(self):
        if self.modulus <= 1:
            raise ValueError("Card modulus must exceed 1")


@dataclass(frozen=True)
class DistLE:
    left: Term
    right: Term
    radius: int

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("distance radius must be >= 0")


@dataclass(frozen=True)
class Dp:
    """dp_k atom: k pairwise vertex-disjoint paths of length >= 2."""

    terms: tuple[Term, ...]

    def __post_init__(self):
        if len(self.terms) % 2 or not self.terms:
            raise ValueError("dp needs an even, positive number of terms")


@dataclass(frozen=True)
class Sdp:
    """s-dp_k atom: as dp_k, with cross-path vertex pairs at distance > s."""

    scatter: int
    terms: tuple[Term, ...]

    def __post_init__(self):
        if len(self.terms) % 2 or not self.terms:
            raise ValueError("sdp needs an even, positive number of terms")
        if self.scatter < 0:
            raise ValueError("sdp scatter must be >= 0")


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ExistsSet:
    setvar: str
    body: "Formula"


@dataclass(frozen=True)
class ForallSet:
    setvar: str
    body: "Formula"


Formula = Union[
    Top, Bottom, Eq, Rel, InSet, Card, DistLE, Dp, Sdp,
    Not, And, Or, Exists, Forall, ExistsSet, ForallSet,
]


def conj(*parts: Formula) -> Formula:
    parts = tuple(p for p in parts if not isinstance(p, Top))
    if any(isinstance(p, Bottom) for p in parts):
        return Bottom()
    if not parts:
        return Top()
    return parts[0] if len(parts) == 1 else And(parts)


def disj(*parts: Formula) -> Formula:
    parts = tuple(p for p in parts if not isinstance(p, Bottom))
    if any(isinstance(p, Top) for p in parts):
        return Top()
    if not parts:
        return Bottom()
    return parts[0] if len(parts) == 1 else Or(parts)


def implies(a: Formula, b: Formula) -> Formula:
    return disj(Not(a), b)


def free_variables(phi: Formula) -> tuple[frozenset[str], frozenset[str]]:
    """(free first-order variables, free set variables)."""

    def walk(node, bound_fo, bound_set, fo, so):
        if isinstance(node, (Top, Bottom, Card)):
            if isinstance(node, Card) and node.setvar not in bound_set:
                so.add(node.setvar)
            return
        if isinstance(node, (Eq, DistLE)):
            for t in (node.left, node.right):
                if isinstance(t, Var) and t.name not in bound_fo:
                    fo.add(t.name)
            return
        if isinstance(node, (Rel, Dp)):
            for t in node.terms:
                if isinstance(t, Var) and t.name not in bound_fo:
                    fo.add(t.name)
            return
        if isinstance(node, Sdp):
            for t in node.terms:
                if isinstance(t, Var) and t.name not in bound_fo:
                    fo.add(t.name)
            return
        if isinstance(node, InSet):
            if isinstance(node.term, Var) and node.term.name not in bound_fo:
                fo.add(node.term.name)
            if node.setvar not in bound_set:
                so.add(node.setvar)
            return
        if isinstance(node, Not):
            walk(node.body, bound_fo, bound_set, fo, so)
            return
        if isinstance(node, (And, Or)):
            for p in node.parts:
                walk(p, bound_fo, bound_set, fo, so)
            return
        if isinstance(node, (Exists, Forall)):
            walk(node.body, bound_fo | {node.var}, bound_set, fo, so)
            return
        if isinstance(node, (ExistsSet, ForallSet)):
            walk(node.body, bound_fo, bound_set | {node.setvar}, fo, so)
            return
        raise TypeError(f"unknown node {node!r}")

    fo: set[str] = set()
    so: set[str] = set()
    walk(phi, frozenset(), frozenset(), fo, so)
    return frozenset(fo), frozenset(so)


def is_first_order(phi: Formula) -> bool:
    """True when the formula uses no set machinery and no special atoms."""
    if isinstance(phi, (Top, Bottom, Eq, Rel)):
        return True
    if isinstance(phi, Not):
        return is_first_order(phi.body)
    if isinstance(phi, (And, Or)):
        return all(is_first_order(p) for p in phi.parts)
    if isinstance(phi, (Exists, Forall)):
        return is_first_order(phi.body)
    return False


def uses_disjoint_paths(phi: Formula) -> bool:
    if isinstance(phi, (Dp, Sdp)):
        return True
    if isinstance(phi, Not):
        return uses_disjoint_paths(phi.body)
    if isinstance(phi, (And, Or)):
        return any(uses_disjoint_paths(p) for p in phi.parts)
    if isinstance(phi, (Exists, Forall, ExistsSet, ForallSet)):
        return uses_disjoint_paths(phi.body)
    return False


def quantifier_rank(phi: Formula) -> int:
    if isinstance(phi, Not):
        return quantifier_rank(phi.body)
    if isinstance(phi, (And, Or)):
        return max((quantifier_rank(p) for p in phi.parts), default=0)
    if isinstance(phi, (Exists, Forall, ExistsSet, ForallSet)):
        return 1 + quantifier_rank(phi.body)
    return 0


# ---------------------------------------------------------------------------
# Pretty printer


def pretty(phi: Formula) -> str:
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bottom):
        return "false"
    if isinstance(phi, Eq):
        return f"{_term(phi.left)} = {_term(phi.right)}"
    if isinstance(phi, Rel):
        return f"{phi.symbol}({', '.join(_term(t) for t in phi.terms)})"
    if isinstance(phi, InSet):
        return f"{_term(phi.term)} in {phi.setvar}"
    if isinstance(phi, Card):
        return f"Card{phi.modulus}({phi.setvar})"
    if isinstance(phi, DistLE):
        return f"dist<={phi.radius}({_term(phi.left)}, {_term(phi.right)})"
    if isinstance(phi, Dp):
        k = len(phi.terms) // 2
        return f"dp{k}({', '.join(_term(t) for t in phi.terms)})"
    if isinstance(phi, Sdp):
        k = len(phi.terms) // 2
        return f"sdp{phi.scatter},{k}({', '.join(_term(t) for t in phi.terms)})"
    if isinstance(phi, Not):
        return f"!({pretty(phi.body)})"
    if isinstance(phi, And):
        return "(" + " & ".join(pretty(p) for p in phi.parts) + ")"
    if isinstance(phi, Or):
        return "(" + " | ".join(pretty(p) for p in phi.parts) + ")"
    if isinstance(phi, Exists):
        return f"exists {phi.var}. {pretty(phi.body)}"
    if isinstance(phi, Forall):
        return f"forall {phi.var}. {pretty(phi.body)}"
    if isinstance(phi, ExistsSet):
        return f"exists {phi.setvar}. {pretty(phi.body)}"
    if isinstance(phi, ForallSet):
        return f"forall {phi.setvar}. {pretty(phi.body)}"
    raise TypeError(f"unknown node {phi!r}")


def _term(t: Term) -> str:
    return t.name


# ---------------------------------------------------------------------------
# Parser (recursive descent over a regex token stream)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<sdp>sdp(?P<sdp_s>\d+),(?P<sdp_k>\d+))
  | (?P<dp>dp(?P<dp_k>\d+))
  | (?P<card>Card(?P<card_p>\d+))
  | (?P<distle>dist<=(?P<dist_r>\d+))
  | (?P<distgt>dist>(?P<distgt_r>\d+))
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op><->|->|!=|=|!|&|\||\(|\)|,|\.)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"exists", "forall", "in", "true", "false", "and", "or", "not"}


@dataclass
class _Token:
    kind: str
    text: str
    line: int
    column: int
    payload: tuple = ()


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise SyntaxIssue(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup if m.lastgroup in {"ws", "name", "op"} else None
        raw = m.group(0)
        if m.group("ws"):
            pass
        elif m.group("sdp"):
            tokens.append(_Token("sdp", raw, line, col, (int(m.group("sdp_s")), int(m.group("sdp_k")))))
        elif m.group("dp"):
            tokens.append(_Token("dp", raw, line, col, (int(m.group("dp_k")),)))
        elif m.group("card"):
            tokens.append(_Token("card", raw, line, col, (int(m.group("card_p")),)))
        elif m.group("distle"):
            tokens.append(_Token("distle", raw, line, col, (int(m.group("dist_r")),)))
        elif m.group("distgt"):
            tokens.append(_Token("distgt", raw, line, col, (int(m.group("distgt_r")),)))
        elif m.group("name"):
            word = raw
            tokens.append(_Token(word if word in _KEYWORDS else "name", word, line, col))
        else:
            tokens.append(_Token(raw, raw, line, col))
        for ch in raw:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    """Grammar (low to high precedence): <-> , -> , |/or , &/and , !/not, atoms.

    Quantifiers bind as far right as possible.  Identifiers starting with an
    uppercase letter that are not applied to arguments are set variables;
    lowercase identifiers are first-order variables, except names declared
    constant by the vocabulary.
    """

    def __init__(self, tokens: list[_Token], constants: frozenset[str]):
        self.tokens = tokens
        self.pos = 0
        self.constants = constants

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self, kind: Optional[str] = None) -> _Token:
        tok = self.tokens[self.pos]
        if kind is not None and tok.kind != kind:
            raise SyntaxIssue(f"expected {kind}, found {tok.text!r}", tok.line, tok.column)
        self.pos += 1
        return tok

    def parse(self) -> Formula:
        phi = self.iff()
        tok = self.peek()
        if tok.kind != "eof":
            raise SyntaxIssue(f"trailing input {tok.text!r}", tok.line, tok.column)
        return phi

    def iff(self) -> Formula:
        left = self.implication()
        if self.peek().kind == "<->":
            self.take()
            right = self.iff()
            return conj(implies(left, right), implies(right, left))
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek().kind == "->":
            self.take()
            right = self.implication()
            return implies(left, right)
        return left

    def disjunction(self) -> Formula:
        parts = [self.conjunction()]
        while self.peek().kind in {"|", "or"}:
            self.take()
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction(self) -> Formula:
        parts = [self.unary()]
        while self.peek().kind in {"&", "and"}:
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind in {"!", "not"}:
            self.take()
            return Not(self.unary())
        if tok.kind in {"exists", "forall"}:
            self.take()
            name = self.take("name").text
            if self.peek().kind == ".":
                self.take()
            body = self.iff()
            if name[0].isupper():
                return ExistsSet(name, body) if tok.kind == "exists" else ForallSet(name, body)
            return Exists(name, body) if tok.kind == "exists" else Forall(name, body)
        return self.atom()

    def term(self) -> Term:
        tok = self.take("name")
        if tok.text in self.constants:
            return Const(tok.text)
        return Var(tok.text)

    def term_list(self) -> tuple[Term, ...]:
        self.take("(")
        terms = [self.term()]
        while self.peek().kind == ",":
            self.take()
            terms.append(self.term())
        self.take(")")
        return tuple(terms)

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind == "(":
            self.take()
            phi = self.iff()
            self.take(")")
            return phi
        if tok.kind == "true":
            self.take()
            return Top()
        if tok.kind == "false":
            self.take()
            return Bottom()
        if tok.kind == "card":
            self.take()
            self.take("(")
            setvar = self.take("name").text
            self.take(")")
            return Card(setvar, tok.payload[0])
        if tok.kind == "distle":
            self.take()
            terms = self.term_list()
            if len(terms) != 2:
                raise SyntaxIssue("dist takes two terms", tok.line, tok.column)
            return DistLE(terms[0], terms[1], tok.payload[0])
        if tok.kind == "distgt":
            self.take()
            terms = self.term_list()
            if len(terms) != 2:
                raise SyntaxIssue("dist takes two terms", tok.line, tok.column)
            return Not(DistLE(terms[0], terms[1], tok.payload[0]))
        if tok.kind == "dp":
            self.take()
            terms = self.term_list()
            if len(terms) != 2 * tok.payload[0]:
                raise SyntaxIssue(f"dp{tok.payload[0]} takes {2 * tok.payload[0]} terms", tok.line, tok.column)
            return Dp(terms)
        if tok.kind == "sdp":
            self.take()
            s, k = tok.payload
            terms = self.term_list()
            if len(terms) != 2 * k:
                raise SyntaxIssue(f"sdp{s},{k} takes {2 * k} terms", tok.line, tok.column)
            return Sdp(s, terms)
        if tok.kind == "name":
            name = self.take().text
            nxt = self.peek()
            if nxt.kind == "(":
                terms = self.term_list()
                return Rel(name, terms)
            left: Term = Const(name) if name in self.constants else Var(name)
            if nxt.kind == "=":
                self.take()
                return Eq(left, self.term())
            if nxt.kind == "!=":
                self.take()
                return Not(Eq(left, self.term()))
            if nxt.kind == "in":
                self.take()
                setvar = self.take("name").text
                if not setvar[0].isupper():
                    raise SyntaxIssue("set variables start uppercase", nxt.line, nxt.column)
                return InSet(left, setvar)
            raise SyntaxIssue(f"dangling term {name!r}", tok.line, tok.column)
        raise SyntaxIssue(f"unexpected {tok.text!r}", tok.line, tok.column)


def parse_formula(text: str, vocabulary=None) -> Formula:
    """Parse the ASCII concrete syntax; see the package README for the EBNF."""
    constants = vocabulary.constants if vocabulary is not None else frozenset()
    phi = _Parser(_tokenize(text), frozenset(constants)).parse()
    if vocabulary is not None:
        _check_symbols(phi, vocabulary)
    return phi


def _check_symbols(phi: Formula, vocabulary) -> None:
    if isinstance(phi, Rel):
        if phi.symbol not in vocabulary.relations:
            raise EvaluationError(f"unknown relation symbol {phi.symbol!r}")
        if len(phi.terms) != vocabulary.arity(phi.symbol):
            raise EvaluationError(
                f"{phi.symbol} has arity {vocabulary.arity(phi.symbol)}, got {len(phi.terms)} terms"
            )
    elif isinstance(phi, Not):
        _check_symbols(phi.body, vocabulary)
    elif isinstance(phi, (And, Or)):
        for p in phi.parts:
            _check_symbols(p, vocabulary)
    elif isinstance(phi, (Exists, Forall, ExistsSet, ForallSet)):
        _check_symbols(phi.body, vocabulary)


# ---------------------------------------------------------------------------
# Evaluation

Assignment = dict[str, object]  # var name -> element id; set var name -> frozenset


def _distances_from(adj: dict[int, frozenset[int]], source: int) -> dict[int, int]:
    dist = {source: 0}
    frontier = [source]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for v in frontier:
            for u in adj[v]:
                if u not in dist:
                    dist[u] = d
                    nxt.append(u)
        frontier = nxt
    return dist


class _Context:
    def __init__(self, structure: Structure, set_cap: int):
        self.structure = structure
        self.adj = structure.gaifman_adjacency
        self.set_cap = set_cap
        self._dist: dict[int, dict[int, int]] = {}

    def distance(self, a, b) -> float:
        if a == b:
            return 0
        if a is None or b is None:
            return float("inf")
        if a not in self._dist:
            self._dist[a] = _distances_from(self.adj, a)
        return self._dist[a].get(b, float("inf"))


def evaluate(
    structure: Structure,
    phi: Formula,
    assignment: Optional[Assignment] = None,
    set_cap: int = SET_QUANTIFIER_CAP,
) -> bool:
    """Exact model checking by direct recursion."""
    ctx = _Context(structure, set_cap)
    env = dict(assignment or {})
    fo, so = free_variables(phi)
    missing = (fo | so) - set(env)
    if missing:
        raise EvaluationError(f"unbound variables: {sorted(missing)}")
    return _eval(ctx, phi, env)


def _value(ctx: _Context, env: Assignment, t: Term):
    if isinstance(t, Var):
        return env[t.name]
    if t.name not in ctx.structure.vocabulary.constants:
        raise EvaluationError(f"unknown constant {t.name!r}")
    return ctx.structure.constants.get(t.name)


def _eval(ctx: _Context, phi: Formula, env: Assignment) -> bool:
    s = ctx.structure
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bottom):
        return False
    if isinstance(phi, Eq):
        return _value(ctx, env, phi.left) == _value(ctx, env, phi.right)
    if isinstance(phi, Rel):
        if phi.symbol not in s.relations:
            raise EvaluationError(f"unknown relation symbol {phi.symbol!r}")
        if len(phi.terms) != s.vocabulary.arity(phi.symbol):
            raise EvaluationError(
                f"{phi.symbol} expects {s.vocabulary.arity(phi.symbol)} terms, "
                f"got {len(phi.terms)}"
            )
        values = tuple(_value(ctx, env, t) for t in phi.terms)
        if any(v is None for v in values):
            return False  # relation tuples never contain the null sentinel
        return values in s.relations[phi.symbol]
    if isinstance(phi, InSet):
        v = _value(ctx, env, phi.term)
        members = env[phi.setvar]
        return v is not None and v in members
    if isinstance(phi, Card):
        return len(env[phi.setvar]) % phi.modulus == 0
    if isinstance(phi, DistLE):
        a = _value(ctx, env, phi.left)
        b = _value(ctx, env, phi.right)
        return ctx.distance(a, b) <= phi.radius
    if isinstance(phi, Dp):
        values = tuple(_value(ctx, env, t) for t in phi.terms)
        if any(v is None for v in values):
            return False
        pairs = [(values[2 * i], values[2 * i + 1]) for i in range(len(values) // 2)]
        return has_disjoint_paths(ctx.adj, pairs)
    if isinstance(phi, Sdp):
        values = tuple(_value(ctx, env, t) for t in phi.terms)
        if any(v is None for v in values):
            return False
        pairs = [(values[2 * i], values[2 * i + 1]) for i in range(len(values) // 2)]
        return has_disjoint_paths(ctx.adj, pairs, scatter=phi.scatter, ctx=ctx)
    if isinstance(phi, Not):
        return not _eval(ctx, phi.body, env)
    if isinstance(phi, And):
        return all(_eval(ctx, p, env) for p in phi.parts)
    if isinstance(phi, Or):
        return any(_eval(ctx, p, env) for p in phi.parts)
    if isinstance(phi, Exists):
        for v in sorted(s.universe):
            env2 = dict(env)
            env2[phi.var] = v
            if _eval(ctx, phi.body, env2):
                return True
        return False
    if isinstance(phi, Forall):
        for v in sorted(s.universe):
            env2 = dict(env)
            env2[phi.var] = v
            if not _eval(ctx, phi.body, env2):
                return False
        return True
    if isinstance(phi, (ExistsSet, ForallSet)):
        if len(s.universe) > ctx.set_cap:
            raise LimitExceeded(
                f"set quantifier over {len(s.universe)} elements exceeds cap {ctx.set_cap}"
            )
        elements = sorted(s.universe)
        want = isinstance(phi, ExistsSet)
        for size in range(len(elements) + 1):
            for subset in itertools.combinations(elements, size):
                env2 = dict(env)
                env2[phi.setvar] = frozenset(subset)
                if _eval(ctx, phi.body, env2) == want:
                    return want
        return not want
    raise TypeError(f"unknown node {phi!r}")


# ---------------------------------------------------------------------------
# Disjoint paths


def simple_paths(adj: dict[int, frozenset[int]], source: int, target: int,
                 forbidden: frozenset[int] = frozenset(), min_edges: int = 2):
    """Yield vertex tuples of simple source-target paths avoiding forbidden."""
    if source == target or source in forbidden or target in forbidden:
        return
    path = [source]
    on_path = {source}

    def walk(v):
        for u in sorted(adj[v]):
            if u in forbidden or u in on_path:
                continue
            if u == target:
                if len(path) >= min_edges:  # len(path) edges so far + final edge
                    yield tuple(path) + (target,)
                continue
            path.append(u)
            on_path.add(u)
            yield from walk(u)
            path.pop()
            on_path.discard(u)

    yield from walk(source)


def has_disjoint_paths(
    adj: dict[int, frozenset[int]],
    pairs: list[tuple[int, int]],
    scatter: int = 0,
    ctx: Optional[_Context] = None,
) -> bool:
    """Pairwise fully vertex-disjoint connecting paths of length >= 2.

    Endpoints count: V(P_i) and V(P_j) must not share any vertex, so repeated
    or shared endpoints make the atom false.  With ``scatter`` = s > 0, every
    two vertices on distinct paths must additionally be at Gaifman distance
    greater than s (distances measured in the ambient structure).
    """
    endpoints = [v for pair in pairs for v in pair]
    if len(set(endpoints)) != len(endpoints):
        return False

    def far_enough(path, chosen):
        if scatter == 0:
            return True
        for other in chosen:
            for v in path:
                for u in other:
                    if ctx.distance(v, u) <= scatter:
                        return False
        return True

    def search(index: int, used: frozenset[int], chosen: list[tuple[int, ...]]) -> bool:
        if index == len(pairs):
            return True
        x, y = pairs[index]
        later = {v for pair in pairs[index + 1:] for v in pair}
        for path in simple_paths(adj, x, y, forbidden=used | later):
            if far_enough(path, chosen):
                if search(index + 1, used | frozenset(path), chosen + [path]):
                    return True
        return False

    return search(0, frozenset(), [])


# ---------------------------------------------------------------------------
# Scattered sets and basic local sentences


def is_scattered(structure: Structure, members: Iterable[int], count: int, radius: int) -> bool:
    """|X| = count and all distinct pairs at Gaifman distance > 2*radius."""
    members = frozenset(members)
    if not members <= structure.universe:
        raise EvaluationError("scattered set leaves the universe")
    if len(members) != count:
        return False
    ctx = _Context(structure, SET_QUANTIFIER_CAP)
    return all(
        ctx.distance(a, b) > 2 * radius for a, b in itertools.combinations(sorted(members), 2)
    )


@dataclass(frozen=True)
class BasicLocalSentence:
    """Exists an (count, radius)-scattered set whose members all satisfy ``local``.

    ``local`` must have exactly one free first-order variable, named ``var``.
    When ``annotation`` is set, the scattered points are drawn from that unary
    relation instead of the full universe.
    """

    count: int
    radius: int
    var: str
    local: Formula
    annotation: Optional[str] = None

    def __post_init__(self):
        if self.count < 1 or self.radius < 1:
            raise ValueError("count and radius must be >= 1")


def evaluate_basic_local(
    structure: Structure,
    sentence: BasicLocalSentence,
    domain: Optional[Iterable[int]] = None,
) -> bool:
    """Exhaustive search over count-subsets of the (annotated) domain."""
    if domain is not None:
        pool = frozenset(domain)
        if not pool <= structure.universe:
            raise EvaluationError("domain leaves the universe")
    elif sentence.annotation is not None:
        pool = structure.annotation(sentence.annotation)
    else:
        pool = structure.universe
    ctx = _Context(structure, SET_QUANTIFIER_CAP)
    hits = [
        v for v in sorted(pool)
        if _eval(ctx, sentence.local, {sentence.var: v})
    ]
    for subset in itertools.combinations(hits, sentence.count):
        if all(
            ctx.distance(a, b) > 2 * sentence.radius
            for a, b in itertools.combinations(subset, 2)
        ):
            return True
    return False


def expand_basic_local(sentence: BasicLocalSentence) -> Formula:
    """The equivalent plain formula (used as a cross-check oracle)."""
    names = [f"_s{i}" for i in range(sentence.count)]
    parts: list[Formula] = []
    for i, j in itertools.combinations(range(sentence.count), 2):
        parts.append(Not(DistLE(Var(names[i]), Var(names[j]), 2 * sentence.radius)))
    for name in names:
        if sentence.annotation is not None:
            parts.append(Rel(sentence.annotation, (Var(name),)))
        parts.append(_substitute(sentence.local, sentence.var, Var(name)))
    phi = conj(*parts)
    for name in reversed(names):
        phi = Exists(name, phi)
    return phi


def _substitute(phi: Formula, var: str, replacement: Term) -> Formula:
    def sub_term(t: Term) -> Term:
        return replacement if isinstance(t, Var) and t.name == var else t

    if isinstance(phi, (Top, Bottom, Card)):
        return phi
    if isinstance(phi, Eq):
        return Eq(sub_term(phi.left), sub_term(phi.right))
    if isinstance(phi, Rel):
        return Rel(phi.symbol, tuple(sub_term(t) for t in phi.terms))
    if isinstance(phi, InSet):
        return InSet(sub_term(phi.term), phi.setvar)
    if isinstance(phi, DistLE):
        return DistLE(sub_term(phi.left), sub_term(phi.right), phi.radius)
    if isinstance(phi, Dp):
        return Dp(tuple(sub_term(t) for t in phi.terms))
    if isinstance(phi, Sdp):
        return Sdp(phi.scatter, tuple(sub_term(t) for t in phi.terms))
    if isinstance(phi, Not):
        return Not(_substitute(phi.body, var, replacement))
    if isinstance(phi, And):
        return And(tuple(_substitute(p, var, replacement) for p in phi.parts))
    if isinstance(phi, Or):
        return Or(tuple(_substitute(p, var, replacement) for p in phi.parts))
    if isinstance(phi, (Exists, Forall)):
        if phi.var == var:
            return phi
        cls = type(phi)
        return cls(phi.var, _substitute(phi.body, var, replacement))
    if isinstance(phi, (ExistsSet, ForallSet)):
        cls = type(phi)
        return cls(phi.setvar, _substitute(phi.body, var, replacement))
    raise TypeError(f"unknown node {phi!r}")
