"""Hardness gadgets: the reduction to disconnectivity and expressing M.

Two constructions:

* reduce_sat_to_conn turns a monotone/negative CNF (clauses P = x OR y OR z
  and N = NOT x OR NOT y) into a conjunction of M-constraints whose
  solution graph is disconnected iff the input is satisfiable.  Around the
  all-zero solution the M-constraints are inert; a satisfying assignment
  lifts to a solution that cannot reach zero because every q/a/b chain
  re-implies itself around the cycle of ternary clauses.

* express_m starts from any Horn relation that is not safely
  componentwise IHSB- and pins variables of a single constraint (by
  constants and identifications only) until the constraint's relation is
  exactly M, or K or L, which fold to M with one extra constraint
  (M(x,y,z) = K(x,y,z) AND K(z,x,x) = L(x,y,z) AND L(z,x,x)).

Both constructions verify their postconditions by enumeration before
returning.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from . import horn as hornmod
from .catalog import CATALOG
from .classify import profile
from .errors import ExpressionError, ReductionInputError, TriviallySatisfiableError
from .formulas import Constraint, Formula, evaluate, make_formula
from .horn import HornClause, HornView
from .relations import (IHSB_MINUS, ArgPattern, Relation, apply_pattern,
                        check_property, componentwise, components,
                        iter_identification_patterns)
from . import solution_graph

_P = CATALOG["P"]
_N = CATALOG["N"]
_M = CATALOG["M"]
_K = CATALOG["K"]
_L = CATALOG["L"]


@dataclass(frozen=True)
class ReductionOutput:
    formula: Formula
    input_variables: tuple[str, ...]
    chain_variables: tuple[str, ...]            # one per ternary input clause
    gadget_variables: tuple[tuple[str, str, str], ...]  # (a, b, input var) triples

    def lift(self, assignment: Mapping[str, int]) -> dict[str, int]:
        """Map a satisfying assignment of the input onto a solution of the
        output formula (chain and a-variables high, b tracks its input)."""
        out = {v: (1 if assignment[v] else 0) for v in self.input_variables}
        for q in self.chain_variables:
            out[q] = 1
        for a, b, x in self.gadget_variables:
            out[a] = 1
            out[b] = out[x]
        return out


def _fresh_namer(taken: set[str]):
    def fresh(base: str) -> str:
        name = base
        while name in taken:
            name = "_" + name
        taken.add(name)
        return name
    return fresh


def reduce_sat_to_conn(psi: Formula) -> ReductionOutput:
    """Reduction from satisfiability over {P, N} to disconnectivity over {M}.

    The input may use any relation names, but every constraint's relation
    must equal P (ternary, everything but 000) or N (binary NAND), applied
    to variables only.  At least one P-constraint is required; inputs with
    only N-constraints are satisfiable by all-zeros, which the dedicated
    TriviallySatisfiableError signals.
    """
    p_indices = []
    for i, c in enumerate(psi.constraints):
        rel = psi.relation_of(c)
        if any(a in ("0", "1") for a in c.args):
            raise ReductionInputError(f"{c}: constants are not allowed here")
        if rel.arity == 3 and rel.members == _P.members:
            p_indices.append(i)
        elif rel.arity == 2 and rel.members == _N.members:
            pass
        else:
            raise ReductionInputError(f"{c}: relation is neither P nor N")
    if not p_indices:
        raise TriviallySatisfiableError(
            "no ternary clause: the all-zero assignment satisfies the input")

    taken = set(psi.variables)
    fresh = _fresh_namer(taken)
    m = len(p_indices)
    q_names = [fresh(f"q{p}") for p in range(m)]
    constraints: list[Constraint] = []
    gadgets: list[tuple[str, str, str]] = []
    variables: list[str] = list(psi.variables)
    variables.extend(q_names)
    p_rank = {ci: p for p, ci in enumerate(p_indices)}
    for i, c in enumerate(psi.constraints):
        rel = psi.relation_of(c)
        if rel.arity == 2:
            xi, xj = c.args
            constraints.append(Constraint("M", ("0", xi, xj)))
            continue
        p = p_rank[i]
        q_here = q_names[p]
        q_next = q_names[(p + 1) % m]
        for x in c.variables():  # one gadget per distinct variable
            a = fresh(f"a{p}_{x}")
            b = fresh(f"b{p}_{x}")
            variables.extend((a, b))
            gadgets.append((a, b, x))
            constraints.append(Constraint("M", (q_here, "0", a)))
            constraints.append(Constraint("M", (b, a, x)))
            constraints.append(Constraint("M", (b, "0", q_next)))
    phi = make_formula(constraints, {"M": _M}, variables)
    return ReductionOutput(phi, tuple(psi.variables), tuple(q_names), tuple(gadgets))


def build_T() -> Formula:
    """Four M-constraints with a disconnected solution graph even though
    every constraint projection of the solution set is connected."""
    return make_formula(
        [Constraint("M", ("u", "v", "w")),
         Constraint("M", ("x", "y", "z")),
         Constraint("M", ("w", "w", "y")),
         Constraint("M", ("z", "z", "v"))],
        {"M": _M},
        ("u", "v", "w", "x", "y", "z"))


def build_F() -> Formula:
    """Two constraints over one non-Schaefer relation: all four solutions are
    isolated, yet both projections connect the images of 0000 and 1100."""
    rf = Relation.from_tuples(3, ["000", "011", "100", "110"], "RF")
    return make_formula(
        [Constraint("RF", ("x", "y", "z")), Constraint("RF", ("y", "x", "w"))],
        {"RF": rf},
        ("x", "y", "z", "w"))


# --- expressing M ---------------------------------------------------------


@dataclass
class _State:
    """Current constraint view: which constant/variable fills each of the
    source relation's coordinates, plus a Horn CNF of the same relation."""
    slots: list[str]          # coordinate -> "0" | "1" | variable name
    view: HornView

    def alive(self) -> tuple[str, ...]:
        return self.view.variables


def _pattern_of(slots: list[str], order: tuple[str, ...]) -> ArgPattern:
    index = {v: j for j, v in enumerate(order)}
    return ArgPattern(tuple(s if s in ("0", "1") else index[s] for s in slots))


def _state_relation(rel: Relation, state: _State) -> Relation:
    return apply_pattern(rel, _pattern_of(state.slots, state.alive()))


def _check_sync(rel: Relation, state: _State) -> None:
    from .bitspace import iter_bits
    want = _state_relation(rel, state).members
    got = frozenset(iter_bits(hornmod.solution_space(state.view)))
    if want != got:
        raise ExpressionError("internal: clause view lost track of the relation")


def _substitute(state: _State, asg: Mapping[str, int]) -> _State:
    slots = [str(asg[s]) if s in asg else s for s in state.slots]
    clauses = []
    for c in state.view.clauses:
        head = c.head
        if head is not None and head in asg:
            if asg[head] == 1:
                continue
            head = None
        if any(asg.get(b) == 0 for b in c.body):
            continue
        body = frozenset(b for b in c.body if b not in asg)
        if head is None and not body:
            raise ExpressionError("internal: substitution produced a false clause")
        clauses.append(HornClause(head, body, c.origin))
    alive = tuple(v for v in state.view.variables if v not in asg)
    return _State(slots, HornView(alive, tuple(clauses)))


def _identify(state: _State, merge: Mapping[str, str]) -> _State:
    slots = [merge.get(s, s) for s in state.slots]
    clauses = []
    for c in state.view.clauses:
        head = merge.get(c.head, c.head) if c.head is not None else None
        body = frozenset(merge.get(b, b) for b in c.body)
        clauses.append(HornClause(head, body, c.origin))
    alive = tuple(v for v in state.view.variables if v not in merge)
    return _State(slots, HornView(alive, tuple(clauses)))


def _normalized(rel: Relation, state: _State) -> _State:
    state = _State(state.slots, hornmod.normalize(state.view))
    _check_sync(rel, state)
    return state


def _initial_state(rel: Relation, pattern: ArgPattern) -> _State:
    """Identified relation as one constraint, with its Horn CNF attached."""
    names = tuple(f"c{j + 1}" for j in range(pattern.out_arity))
    slots = [s if s in ("0", "1") else names[s] for s in pattern.slots]
    ident = apply_pattern(rel, pattern)
    phi = make_formula(
        [Constraint("R", tuple(names))], {"R": ident.renamed("R")}, names)
    view = hornmod.view_from_formula(phi)
    return _normalized(rel, _State(slots, view))


def _min_one_set(view: HornView, comp: Relation) -> frozenset[str] | None:
    lower = ~0
    for t in comp.members:
        lower &= t
    if lower not in comp.members:
        return None
    n = comp.arity
    return frozenset(v for j, v in enumerate(view.variables)
                     if (lower >> (n - 1 - j)) & 1)


def _express_candidates(rel: Relation):
    """Deterministic stream of (pattern, component 1-set, c*, y) choices.

    The preferred order follows the construction: first identification
    making the relation not componentwise IHSB-, first failing component,
    multi-implication clauses filtered to those whose variable reach holds
    no restraint set and whose body has an unimplied variable, first
    unimplied body variable.  Later choices serve as verified fallbacks.
    """
    for pattern in iter_identification_patterns(rel.arity):
        identified = apply_pattern(rel, pattern)
        if componentwise(identified, IHSB_MINUS):
            continue
        base = _initial_state(rel, pattern)
        for comp in components(identified):
            if check_property(comp, IHSB_MINUS):
                continue
            u = _min_one_set(base.view, comp)
            if u is None:
                continue
            try:
                state2 = _normalized(rel, _substitute(base, {v: 1 for v in u}))
            except ExpressionError:
                continue
            if state2.view.has_positive_units():
                continue
            multi = [c for c in state2.view.clauses if c.is_multi_implication]
            ordered = sorted(multi, key=lambda c: not _spec_filter(state2.view, c))
            for cstar in ordered:
                yield pattern, state2, cstar


def _spec_filter(view: HornView, cstar: HornClause) -> bool:
    reach = hornmod.imp(view, cstar.variables())
    if any(r <= reach for r in view.restraint_sets()):
        return False
    return any(not hornmod.is_implied(view, y) for y in cstar.body)


@dataclass(frozen=True)
class ExpressOutcome:
    formula: Formula
    shape: str                # which of M, K, L the pinned constraint hits
    slots: tuple[str, ...]    # final coordinate fill with roles x, y, z


def express_m_details(rel: Relation) -> ExpressOutcome:
    """Pin a Horn, not safely componentwise IHSB- relation down to M.

    Returns a one- or two-constraint formula over the input relation whose
    solution set over (x, y, z) is exactly M; the second constraint appears
    when the pinned relation is K or L rather than M itself.
    """
    p = profile(rel)
    if not p.horn:
        raise ExpressionError("relation is not Horn")
    if p.safely_componentwise_ihsb_minus:
        raise ExpressionError(
            "relation is safely componentwise IHSB-; nothing to express")
    name = rel.name or "R"
    src = rel.renamed(name)
    failures: list[str] = []
    for pattern, state2, cstar in _express_candidates(src):
        try:
            outcome = _finish(src, state2, cstar)
        except ExpressionError as exc:
            failures.append(str(exc))
            continue
        if outcome is not None:
            return outcome
    raise ExpressionError(
        "no candidate choice reached M: " + "; ".join(failures[:4]))


def express_m(rel: Relation) -> Formula:
    return express_m_details(rel).formula


def _finish(src: Relation, state2: _State, cstar: HornClause) -> ExpressOutcome | None:
    view2 = state2.view
    reach = hornmod.imp(view2, cstar.variables())
    zero_out = {v: 0 for v in view2.variables if v not in reach}
    state3 = _normalized(src, _substitute(state2, zero_out))
    view3 = state3.view
    # the chosen clause must survive the cut to its implication span
    live = [c for c in view3.clauses
            if c.head == cstar.head and c.body == cstar.body]
    if not live:
        return None
    order = {v: j for j, v in enumerate(view3.variables)}
    x_name = cstar.head
    assert x_name is not None
    for y_name in sorted(cstar.body, key=order.__getitem__):
        if y_name in hornmod.imp(view3, set(view3.variables) - {y_name}):
            continue
        rest = sorted(cstar.body - {y_name}, key=order.__getitem__)
        z_name = rest[0]
        merge = {v: z_name for v in rest[1:]}
        state4 = _normalized(src, _identify(state3, merge)) if merge else state3
        view4 = state4.view
        if not _condition_star(view4, x_name, y_name, z_name):
            continue
        ones = hornmod.imp(view4, {y_name}) - {y_name}
        if x_name in ones or z_name in ones:
            continue
        state5 = _normalized(src, _substitute(state4, {v: 1 for v in ones})) \
            if ones else state4
        zmerge_set = hornmod.imp(state5.view, {z_name}) - {z_name}
        if x_name in zmerge_set or y_name in zmerge_set:
            continue
        state6 = _normalized(src, _identify(state5, {v: z_name for v in zmerge_set})) \
            if zmerge_set else state5
        others = [v for v in state6.view.variables if v not in (x_name, y_name, z_name)]
        state7 = _normalized(src, _identify(state6, {v: x_name for v in others})) \
            if others else state6
        if set(state7.view.variables) != {x_name, y_name, z_name}:
            continue
        outcome = _shape_outcome(src, state7, x_name, y_name, z_name)
        if outcome is not None:
            return outcome
    return None


def _condition_star(view: HornView, x: str, y: str, z: str) -> bool:
    if x in hornmod.imp(view, {y}) or x in hornmod.imp(view, {z}):
        return False
    if z in hornmod.imp(view, {y}):
        return False
    return not hornmod.is_implied(view, y)


def _shape_outcome(src: Relation, state: _State,
                   x: str, y: str, z: str) -> ExpressOutcome | None:
    roles = {x: "x", y: "y", z: "z"}
    slots = tuple(s if s in ("0", "1") else roles[s] for s in state.slots)
    pinned = apply_pattern(src, _pattern_of(list(slots), ("x", "y", "z")))
    shapes = {"M": _M.members, "K": _K.members, "L": _L.members}
    shape = next((nm for nm, mem in shapes.items() if pinned.members == mem), None)
    if shape is None:
        return None
    constraints = [Constraint(src.name, slots)]
    if shape in ("K", "L"):
        fold = {"x": "z", "y": "x", "z": "x"}
        constraints.append(Constraint(
            src.name, tuple(s if s in ("0", "1") else fold[s] for s in slots)))
    phi = make_formula(constraints, {src.name: src}, ("x", "y", "z"))
    if solution_graph.formula_relation(phi).members != _M.members:
        raise ExpressionError(f"{shape}-shaped pin did not fold to M")
    return ExpressOutcome(phi, shape, slots)
