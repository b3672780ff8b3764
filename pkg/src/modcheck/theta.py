"""Compound modulator/target sentences: construction, metadata, exact model
checking by modulator search, the clique-exclusion bound on models, and the
parametric modulator measures (vertex-deletion distance, elimination
distance, bridge-depth, class-constrained treewidth).

A compound sentence holds a modulator sentence over the annotated vocabulary
and a positive-Boolean body of child sentences, each child optionally
connectivity-closed.  The modulator's annotation symbol X marks, in the
collapsed (star) structure, the fresh component vertices; the deleted set
itself is the complement of X there.  A modulator sentence declares an upper
bound on the treewidth of the cliqued star structure of any model; every
accepted modulator is verified against that declaration at run time.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .core import (
    Graph,
    LimitExceeded,
    Structure,
    components_avoiding,
    connected_components,
    gaifman_graph,
    graph,
    induced_substructure,
)
from . import logic
from .logic import Exists, Formula, Not, Rel, Top, Var
from .minors import ObstructionSet, PLANAR_OBSTRUCTIONS, clique_obstruction
from .transforms import cl_x, rm_x, star_x, torso, torso_plus
from .width import treedepth_exact, treewidth_exact, treewidth_of_structure

DEFAULT_MODULATOR_CAP = 14
ANNOTATION = "X"


class ModulatorContractError(Exception):
    """An accepted modulator violated its declared treewidth bound.

    This indicts the user's modulator sentence (it is not in the
    bounded-treewidth fragment it claims), not the engine.
    """


@dataclass(frozen=True)
class ModulatorSentence:
    """Sentence over the annotated vocabulary plus a declared width bound.

    Contract: whenever the star structure of an accepted modulator models
    ``formula``, the cliqued star structure has treewidth <= ``declared_tw``.
    """

    formula: Formula
    declared_tw: int

    def __post_init__(self):
        if self.declared_tw < 0:
            raise ValueError("declared treewidth must be >= 0")


@dataclass(frozen=True)
class Base:
    """Leaf: a first-order (or FOL+DP) target plus optional minor exclusion."""

    sigma: Formula
    obstructions: Optional[ObstructionSet] = None
    variant: str = "plain"

    def __post_init__(self):
        if self.variant not in ("plain", "dp"):
            raise ValueError("variant must be 'plain' or 'dp'")
        if logic.uses_disjoint_paths(self.sigma) and self.variant != "dp":
            raise ValueError("disjoint-path atoms require the dp variant")


@dataclass(frozen=True)
class Child:
    theta: "ThetaSentence"
    per_component: bool = False


@dataclass(frozen=True)
class BodyAnd:
    parts: tuple["Body", ...]


@dataclass(frozen=True)
class BodyOr:
    parts: tuple["Body", ...]


Body = Union[Child, BodyAnd, BodyOr]


@dataclass(frozen=True)
class Compound:
    modulator: ModulatorSentence
    body: Body


ThetaSentence = Union[Base, Compound]


@dataclass(frozen=True)
class ThetaMetadata:
    height: int
    tw: int
    hw: int

    @property
    def clique_exclusion_bound(self) -> int:
        """Models exclude the complete graph on this many vertices as a minor."""
        return self.hw + (self.tw + 1) * self.height


def _iter_children(body: Body):
    if isinstance(body, Child):
        yield body
    else:
        for part in body.parts:
            yield from _iter_children(part)


def metadata(theta: ThetaSentence) -> ThetaMetadata:
    if isinstance(theta, Base):
        hw = theta.obstructions.bound if theta.obstructions is not None else 0
        return ThetaMetadata(height=0, tw=0, hw=hw)
    inner = [metadata(ch.theta) for ch in _iter_children(theta.body)]
    return ThetaMetadata(
        height=1 + max(m.height for m in inner),
        tw=max([theta.modulator.declared_tw] + [m.tw for m in inner]),
        hw=max([0] + [m.hw for m in inner]),
    )


def _subsets_lex(elements: Sequence[int]):
    """All subsets as sorted tuples, in lexicographic order."""
    subs = itertools.chain.from_iterable(
        itertools.combinations(elements, k) for k in range(len(elements) + 1)
    )
    return sorted(subs)


def model_check_theta(
    structure: Structure,
    theta: ThetaSentence,
    cap: int = DEFAULT_MODULATOR_CAP,
    set_cap: Optional[int] = None,
):
    """Exact model check; returns (holds, witness).

    The witness records, per compound node along the accepting branch, the
    lexicographically least accepted modulator set, and recursively the
    witnesses of the satisfied body parts.
    """
    set_cap = set_cap if set_cap is not None else logic.SET_QUANTIFIER_CAP
    if isinstance(theta, Base):
        if not logic.evaluate(structure, theta.sigma, set_cap=set_cap):
            return False, None
        if theta.obstructions is not None:
            if not theta.obstructions.excludes(gaifman_graph(structure)):
                return False, None
        return True, {"base": True}
    if len(structure.universe) > cap:
        raise LimitExceeded(
            f"modulator search over {len(structure.universe)} elements exceeds cap {cap}"
        )
    for subset in _subsets_lex(sorted(structure.universe)):
        modulator_set = frozenset(subset)
        annotated = structure.annotate(ANNOTATION, modulator_set)
        star = star_x(annotated)
        if not logic.evaluate(star, theta.modulator.formula, set_cap=set_cap):
            continue
        cliqued = cl_x(star)
        width = treewidth_of_structure(cliqued)
        if width > theta.modulator.declared_tw:
            raise ModulatorContractError(
                f"modulator {sorted(modulator_set)} accepted but its cliqued star "
                f"structure has treewidth {width} > declared {theta.modulator.declared_tw}"
            )
        remainder = rm_x(annotated, modulator_set)
        holds, body_witness = _check_body(remainder, theta.body, cap, set_cap)
        if holds:
            return True, {"modulator": sorted(modulator_set), "body": body_witness}
    return False, None


def _check_body(structure: Structure, body: Body, cap: int, set_cap: int):
    if isinstance(body, Child):
        if body.per_component:
            parts = []
            for comp in connected_components(structure):
                holds, w = model_check_theta(
                    induced_substructure(structure, comp), body.theta, cap, set_cap
                )
                if not holds:
                    return False, None
                parts.append({"component": sorted(comp), "witness": w})
            return True, {"per_component": parts}
        return model_check_theta(structure, body.theta, cap, set_cap)
    if isinstance(body, BodyAnd):
        collected = []
        for part in body.parts:
            holds, w = _check_body(structure, part, cap, set_cap)
            if not holds:
                return False, None
            collected.append(w)
        return True, {"and": collected}
    if isinstance(body, BodyOr):
        for index, part in enumerate(body.parts):
            holds, w = _check_body(structure, part, cap, set_cap)
            if holds:
                return True, {"or": index, "witness": w}
        return False, None
    raise TypeError(f"unknown body node {body!r}")


def replay_witness(
    structure: Structure,
    theta: ThetaSentence,
    witness,
    cap: int = DEFAULT_MODULATOR_CAP,
    set_cap: Optional[int] = None,
) -> bool:
    """Re-verify a witness without searching."""
    set_cap = set_cap if set_cap is not None else logic.SET_QUANTIFIER_CAP
    if witness is None:
        return False
    if isinstance(theta, Base):
        holds, _ = model_check_theta(structure, theta, cap, set_cap)
        return holds
    modulator_set = frozenset(witness["modulator"])
    if not modulator_set <= structure.universe:
        return False
    annotated = structure.annotate(ANNOTATION, modulator_set)
    star = star_x(annotated)
    if not logic.evaluate(star, theta.modulator.formula, set_cap=set_cap):
        return False
    remainder = rm_x(annotated, modulator_set)
    return _replay_body(remainder, theta.body, witness["body"], cap, set_cap)


def _replay_body(structure: Structure, body: Body, witness, cap, set_cap) -> bool:
    if witness is None:
        return False
    if isinstance(body, Child):
        if body.per_component:
            comps = {frozenset(p["component"]): p["witness"] for p in witness["per_component"]}
            actual = set(connected_components(structure))
            if set(comps) != actual:
                return False
            return all(
                replay_witness(induced_substructure(structure, comp), body.theta, w, cap, set_cap)
                for comp, w in comps.items()
            )
        return replay_witness(structure, body.theta, witness, cap, set_cap)
    if isinstance(body, BodyAnd):
        return all(
            _replay_body(structure, part, w, cap, set_cap)
            for part, w in zip(body.parts, witness["and"])
        )
    if isinstance(body, BodyOr):
        index = witness["or"]
        return _replay_body(structure, body.parts[index], witness["witness"], cap, set_cap)
    raise TypeError(f"unknown body node {body!r}")


def check_clique_exclusion_bound(structure: Structure, theta: ThetaSentence) -> bool:
    """Models must exclude the complete graph on hw + (tw+1)*height vertices.

    Precondition: structure is a model of theta.  Returns whether the bound
    holds on this model's Gaifman graph.
    """
    bound = metadata(theta).clique_exclusion_bound
    return clique_obstruction(bound).excludes(gaifman_graph(structure))


# ---------------------------------------------------------------------------
# Named targets


def _fol(text: str) -> Formula:
    return logic.parse_formula(text)


TARGET_ALL = Base(Top())
TARGET_EMPTY = Base(Not(Exists("x", Top())))
TARGET_EDGELESS = Base(_fol("!exists x. exists y. E(x, y)"))
TARGET_FORESTS = Base(Top(), ObstructionSet((graph(range(3), [(0, 1), (1, 2), (0, 2)]),), name="K3"))
TARGET_PLANAR = Base(Top(), PLANAR_OBSTRUCTIONS)

NAMED_TARGETS = {
    "all": TARGET_ALL,
    "empty": TARGET_EMPTY,
    "edgeless": TARGET_EDGELESS,
    "forests": TARGET_FORESTS,
    "planar": TARGET_PLANAR,
}


def size_at_most_modulator(k: int) -> ModulatorSentence:
    """Deleted set of size <= k; in star structures the deleted elements are
    exactly the ones outside the component annotation."""
    names = [f"x{i}" for i in range(k + 1)]
    non_marked = [Not(Rel(ANNOTATION, (Var(n),))) for n in names]
    clash = logic.disj(
        *[logic.Eq(Var(a), Var(b)) for a, b in itertools.combinations(names, 2)]
    )
    phi: Formula = logic.implies(logic.conj(*non_marked), clash)
    for n in reversed(names):
        phi = logic.Forall(n, phi)
    return ModulatorSentence(phi, declared_tw=k)


def empty_modulator() -> ModulatorSentence:
    """Deleted set is empty: every star element carries the annotation."""
    return ModulatorSentence(logic.Forall("x", Rel(ANNOTATION, (Var("x"),))), declared_tw=0)


# ---------------------------------------------------------------------------
# Parametric modulator measures


def _member(g: Graph, target: ThetaSentence, cap: int, set_cap: Optional[int]) -> bool:
    holds, _ = model_check_theta(g, target, cap=cap, set_cap=set_cap)
    return holds


def parametric_measure(
    g: Graph,
    parameter: str,
    target: ThetaSentence,
    cap: int = DEFAULT_MODULATOR_CAP,
    set_cap: Optional[int] = None,
):
    """min over deletion sets X with g - X in the target class of p(torso(g, X)).

    ``parameter`` selects p: 'size' (|X|), 'treedepth', or 'treewidth'.
    Returns math.inf when no deletion set qualifies.
    """
    if parameter not in ("size", "treedepth", "treewidth"):
        raise ValueError(f"unknown parameter selector {parameter!r}")
    if len(g.vertices) > cap:
        raise LimitExceeded(f"{len(g.vertices)} vertices exceeds cap {cap}")
    best = math.inf
    for subset in _subsets_lex(sorted(g.vertices)):
        removed = frozenset(subset)
        rest = g.subgraph(g.vertices - removed)
        if not _member(rest, target, cap, set_cap):
            continue
        if parameter == "size":
            value = len(removed)
        else:
            shell = torso(g, removed)
            if parameter == "treedepth":
                value = treedepth_exact(shell)
            else:
                value = treewidth_exact(shell, with_decomposition=False)
                value = max(value, 0)  # empty torso counts as width 0
        best = min(best, value)
    return best


def g_treewidth(g: Graph, target: ThetaSentence, cap: int = DEFAULT_MODULATOR_CAP) -> float:
    return parametric_measure(g, "treewidth", target, cap=cap)


def elimination_distance(
    g: Graph,
    target: ThetaSentence,
    cap: int = DEFAULT_MODULATOR_CAP,
    set_cap: Optional[int] = None,
):
    """Levels of one-deletion-per-component needed to reach the target class.

    0 when the graph is already in the class; on a disconnected graph the
    maximum over components; otherwise one more than the best single
    deletion.  math.inf when the class is unreachable.
    """
    if len(g.vertices) > cap:
        raise LimitExceeded(f"{len(g.vertices)} vertices exceeds cap {cap}")
    memo: dict[frozenset[int], float] = {}

    def ed(vs: frozenset[int]) -> float:
        if vs in memo:
            return memo[vs]
        sub = g.subgraph(vs)
        if _member(sub, target, cap, set_cap):
            memo[vs] = 0
            return 0
        comps = components_avoiding(sub, frozenset())
        if len(comps) > 1:
            value = max(ed(c) for c in comps)
        elif not vs:
            value = math.inf
        else:
            value = 1 + min(ed(vs - {v}) for v in sorted(vs))
        memo[vs] = value
        return value

    return ed(frozenset(g.vertices))


def _is_forest(g: Graph) -> bool:
    comps = connected_components(g)
    return len(g.edges) == len(g.vertices) - len(comps)


def bridge_depth(
    g: Graph,
    target: ThetaSentence,
    cap: int = DEFAULT_MODULATOR_CAP,
    set_cap: Optional[int] = None,
):
    """Levels of acyclic-extended-torso deletions needed to reach the target.

    At each level some deletion set X with torso_plus(G, X) acyclic is
    removed and the recursion continues per connected component.
    """
    if len(g.vertices) > cap:
        raise LimitExceeded(f"{len(g.vertices)} vertices exceeds cap {cap}")
    memo: dict[tuple[frozenset[int], int], bool] = {}

    def feasible(vs: frozenset[int], k: int) -> bool:
        key = (vs, k)
        if key in memo:
            return memo[key]
        sub = g.subgraph(vs)
        if k == 0:
            result = _member(sub, target, cap, set_cap)
        else:
            result = False
            for subset in _subsets_lex(sorted(vs)):
                removed = frozenset(subset)
                if not _is_forest(torso_plus(sub, removed)):
                    continue
                if all(
                    feasible(c, k - 1) for c in components_avoiding(sub, removed)
                ):
                    result = True
                    break
        memo[key] = result
        return result

    universe = frozenset(g.vertices)
    for k in range(len(g.vertices) + 2):
        if feasible(universe, k):
            return k
    return math.inf


# ---------------------------------------------------------------------------
# Concrete syntax


def parse_theta(text: str) -> ThetaSentence:
    """Parse the compound-sentence surface syntax.

    theta    = base | compound
    base     = "base(" formula [";" "excl{" names "}"] ")"
    compound = "mod(" formula ";" "tw=" INT ")" "|>" "(" body ")"
    body     = or-list of and-lists of items; item = "cc(" theta ")" |
               theta | "(" body ")"
    """
    parser = _ThetaParser(text)
    result = parser.parse_theta()
    parser.expect_end()
    return result


class _ThetaParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        consumed = self.text[: self.pos]
        line = consumed.count("\n") + 1
        column = self.pos - (consumed.rfind("\n") + 1) + 1
        raise logic.SyntaxIssue(message, line, column)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek_word(self) -> str:
        self.skip_ws()
        m = itertools.takewhile(lambda c: c.isalnum() or c == "_", self.text[self.pos:])
        return "".join(m)

    def eat(self, token: str) -> bool:
        self.skip_ws()
        if self.text.startswith(token, self.pos):
            self.pos += len(token)
            return True
        return False

    def expect(self, token: str):
        if not self.eat(token):
            self.error(f"expected {token!r}")

    def expect_end(self):
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("trailing input")

    def balanced(self) -> str:
        """Text of a balanced (...) group, consuming the parentheses."""
        self.expect("(")
        depth = 1
        start = self.pos
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    inner = self.text[start:self.pos]
                    self.pos += 1
                    return inner
            self.pos += 1
        self.error("unbalanced parenthesis")

    def parse_theta(self) -> ThetaSentence:
        word = self.peek_word()
        if word == "base":
            self.expect("base")
            return self.parse_base_args(self.balanced())
        if word == "mod":
            self.expect("mod")
            head = self.balanced()
            self.expect("|>")
            body_text = self.balanced()
            formula_text, tw = _split_mod_head(head)
            modulator = ModulatorSentence(logic.parse_formula(formula_text), tw)
            body = _ThetaParser(body_text)._parse_body_or()
            return Compound(modulator, body)
        self.error("expected 'base' or 'mod'")

    def parse_base_args(self, inner: str) -> Base:
        chunks = _split_top(inner, ";")
        sigma = logic.parse_formula(chunks[0])
        obstructions = None
        for extra in chunks[1:]:
            extra = extra.strip()
            if extra.startswith("excl"):
                names = extra[len("excl"):].strip()
                if not (names.startswith("{") and names.endswith("}")):
                    self.error("excl expects {names}")
                from .minors import named_obstruction_graph

                members = tuple(
                    named_obstruction_graph(n.strip())
                    for n in names[1:-1].split(",")
                    if n.strip()
                )
                obstructions = ObstructionSet(members)
            elif extra:
                self.error(f"unknown base option {extra!r}")
        variant = "dp" if logic.uses_disjoint_paths(sigma) else "plain"
        return Base(sigma, obstructions, variant)

    def _parse_body_or(self) -> Body:
        parts = [self._parse_body_and()]
        while self.eat("or"):
            parts.append(self._parse_body_and())
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("trailing input in body")
        return parts[0] if len(parts) == 1 else BodyOr(tuple(parts))

    def _parse_body_and(self) -> Body:
        parts = [self._parse_body_item()]
        while True:
            save = self.pos
            if self.eat("and"):
                parts.append(self._parse_body_item())
            else:
                self.pos = save
                break
        return parts[0] if len(parts) == 1 else BodyAnd(tuple(parts))

    def _parse_body_item(self) -> Body:
        word = self.peek_word()
        if word == "cc":
            self.expect("cc")
            inner = self.balanced()
            return Child(_ThetaParser(inner).parse_theta_full(), per_component=True)
        if word in ("base", "mod"):
            return Child(self.parse_theta(), per_component=False)
        # parenthesized sub-body
        inner = self.balanced()
        sub = _ThetaParser(inner)
        body = sub._parse_body_or()
        return body

    def parse_theta_full(self) -> ThetaSentence:
        result = self.parse_theta()
        self.expect_end()
        return result


def _split_top(text: str, sep: str) -> list[str]:
    out = []
    depth = 0
    current = []
    for ch in text:
        if ch in "({[":
            depth += 1
        elif ch in ")}]":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(current))
            current = []
        else:
            current.append(ch)
    out.append("".join(current))
    return out


def _split_mod_head(head: str) -> tuple[str, int]:
    chunks = _split_top(head, ";")
    if len(chunks) != 2:
        raise ValueError("mod(...) expects 'formula ; tw=<int>'")
    tw_part = chunks[1].strip()
    if not tw_part.startswith("tw"):
        raise ValueError("mod(...) expects a tw=<int> declaration")
    _, _, value = tw_part.partition("=")
    return chunks[0], int(value.strip())


def theta_to_text(theta: ThetaSentence) -> str:
    if isinstance(theta, Base):
        parts = [logic.pretty(theta.sigma)]
        if theta.obstructions is not None:
            members = ",".join(_member_name(g) for g in theta.obstructions.graphs)
            parts.append(f"excl{{{members}}}")
        return "base(" + " ; ".join(parts) + ")"
    body = _body_to_text(theta.body)
    return (
        f"mod({logic.pretty(theta.modulator.formula)} ; tw={theta.modulator.declared_tw})"
        f" |> ({body})"
    )


def _member_name(g: Graph) -> str:
    n = len(g.vertices)
    m = len(g.edges)
    if m == n * (n - 1) // 2:
        return f"K{n}"
    if n == 6 and m == 9:
        return "K33"
    return f"G{n}_{m}"


def _body_to_text(body: Body) -> str:
    if isinstance(body, Child):
        inner = theta_to_text(body.theta)
        return f"cc({inner})" if body.per_component else inner
    joiner = " and " if isinstance(body, BodyAnd) else " or "
    return "(" + joiner.join(_body_to_text(p) for p in body.parts) + ")"
