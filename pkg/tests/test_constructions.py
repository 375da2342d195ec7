"""The two hardness gadgets: the satisfiability reduction and expressing M."""

from __future__ import annotations

import itertools
import random

import pytest

from relconn import solution_graph as sg
from relconn.catalog import CATALOG
from relconn.constructions import (build_F, build_T, express_m,
                                   express_m_details, reduce_sat_to_conn)
from relconn.errors import (ExpressionError, ReductionInputError,
                            TriviallySatisfiableError)
from relconn.formulas import (Constraint, make_formula, parse_formula)
from relconn.generators import random_horn_not_safely_cw_ihsb_minus
from relconn.relations import Relation
from relconn.solution_graph import formula_relation

M = CATALOG["M"]
P = CATALOG["P"]
N = CATALOG["N"]

GR_TEXT = """var x1 x2 x3 x4
P(x1,x2,x2)
P(x3,x4,x2)
N(x1,x2)
N(x1,x4)
N(x2,x2)
"""


def evaluate_raw(rel_of, constraints, assignment):
    """Constraint check straight off the tuple indices, no formula machinery."""
    for c in constraints:
        idx = 0
        for a in c.args:
            bit = int(a) if a in ("0", "1") else assignment[a]
            idx = (idx << 1) | bit
        if idx not in rel_of(c).members:
            return False
    return True


def psi_satisfiable(psi):
    names = psi.variables
    return any(
        evaluate_raw(psi.relation_of, psi.constraints, dict(zip(names, bits)))
        for bits in itertools.product((0, 1), repeat=len(names)))


class TestReduction:
    def test_figure_fixture(self):
        psi = parse_formula(GR_TEXT, CATALOG)
        out = reduce_sat_to_conn(psi)
        assert len(out.formula.variables) == 16
        assert len(out.formula.constraints) == 18
        assert out.input_variables == ("x1", "x2", "x3", "x4")
        assert out.chain_variables == ("q0", "q1")
        assert [g[2] for g in out.gadget_variables] == \
            ["x1", "x2", "x3", "x4", "x2"]
        comps = sg.components(out.formula)
        assert sorted(len(c) for c in comps) == [1, 161]

    def test_figure_fixture_lift(self):
        psi = parse_formula(GR_TEXT, CATALOG)
        out = reduce_sat_to_conn(psi)
        model = {"x1": 1, "x2": 0, "x3": 1, "x4": 0}
        assert evaluate_raw(psi.relation_of, psi.constraints, model)
        lifted = out.lift(model)
        s = "".join(str(lifted[v]) for v in out.formula.variables)
        minima = sg.locally_minimal(out.formula)
        assert s in minima
        assert len(minima) == 2  # the all-zero solution and the lift

    def test_constraint_order_follows_input(self):
        psi = parse_formula("var x y z\nN(x,y)\nP(x,y,z)\nN(y,z)", CATALOG)
        out = reduce_sat_to_conn(psi)
        kinds = ["N" if c.args[0] == "0" and len(c.variables()) == 2 else "P"
                 for c in out.formula.constraints]
        assert kinds[0] == "N" and kinds[-1] == "N"
        assert all(k == "P" for k in kinds[1:-1])

    def test_output_uses_only_m(self):
        psi = parse_formula("var x y\nP(x,x,y)\nN(x,y)", CATALOG)
        out = reduce_sat_to_conn(psi)
        for c in out.formula.constraints:
            assert out.formula.relation_of(c).members == M.members

    def test_matching_by_content_not_name(self):
        psi = parse_formula(
            "rel CLAUSE 3 : 001 010 011 100 101 110 111\n"
            "rel NAND 2 : 00 01 10\n"
            "var x y\nCLAUSE(x,x,y)\nNAND(x,y)", CATALOG)
        out = reduce_sat_to_conn(psi)
        assert len(out.chain_variables) == 1

    def test_fresh_names_avoid_collisions(self):
        psi = parse_formula("var q0 a0_q0 y\nP(q0,a0_q0,y)", CATALOG)
        out = reduce_sat_to_conn(psi)
        names = set(out.formula.variables)
        assert len(names) == len(out.formula.variables)
        assert out.chain_variables[0] not in psi.variables

    def test_only_nand_clauses_rejected(self):
        psi = parse_formula("var x y\nN(x,y)\nN(y,x)", CATALOG)
        with pytest.raises(TriviallySatisfiableError):
            reduce_sat_to_conn(psi)

    def test_foreign_relation_rejected(self):
        psi = parse_formula("var x y z\nM(x,y,z)", CATALOG)
        with pytest.raises(ReductionInputError):
            reduce_sat_to_conn(psi)

    def test_constants_rejected(self):
        psi = parse_formula("var x y\nP(1,x,y)", CATALOG)
        with pytest.raises(ReductionInputError):
            reduce_sat_to_conn(psi)

    def test_unsatisfiable_input_connected(self):
        psi = parse_formula("var x y\nP(x,x,x)\nN(x,x)\nN(x,y)", CATALOG)
        assert not psi_satisfiable(psi)
        out = reduce_sat_to_conn(psi)
        assert sg.is_connected(out.formula)

    def test_sat_iff_disconnected_random(self):
        rng = random.Random(19)
        seen_sat = seen_unsat = 0
        for _ in range(40):
            names = [f"x{i}" for i in range(rng.randint(2, 3))]
            cons = [Constraint("P", tuple(rng.choices(names, k=3)))]
            extra_p = rng.random() < 0.3  # keeps the output inside the brute bound
            if extra_p:
                cons.append(Constraint("P", tuple(rng.choices(names, k=3))))
            for _ in range(rng.randint(1, 4)):
                cons.append(Constraint("N", tuple(rng.choices(names, k=2))))
            rng.shuffle(cons)
            psi = make_formula(cons, {"P": P, "N": N}, tuple(names))
            out = reduce_sat_to_conn(psi)
            sat = psi_satisfiable(psi)
            seen_sat += sat
            seen_unsat += not sat
            assert sat == (not sg.is_connected(out.formula))
        assert seen_sat > 5 and seen_unsat > 5

    def test_lift_property_random(self):
        """When every input variable occurs in a ternary constraint, every
        satisfying assignment lifts to a locally minimal solution."""
        rng = random.Random(23)
        for _ in range(20):
            names = [f"x{i}" for i in range(3)]
            cons = [Constraint("P", ("x0", "x1", "x2")),
                    Constraint("P", tuple(rng.choices(names, k=3))),
                    Constraint("N", tuple(rng.choices(names, k=2)))]
            psi = make_formula(cons, {"P": P, "N": N}, tuple(names))
            out = reduce_sat_to_conn(psi)
            minima = set(sg.locally_minimal(out.formula))
            for bits in itertools.product((0, 1), repeat=3):
                model = dict(zip(names, bits))
                if evaluate_raw(psi.relation_of, psi.constraints, model):
                    lifted = out.lift(model)
                    s = "".join(str(lifted[v])
                                for v in out.formula.variables)
                    assert s in minima

    def test_lift_of_a_variable_outside_ternary_constraints(self):
        """An input variable that occurs only in binary constraints is not
        pinned by any gadget: its 1 can still flip down after the lift, so
        that lift is a disconnection witness but not locally minimal."""
        psi = make_formula([Constraint("P", ("x2", "x2", "x2")),
                            Constraint("N", ("x0", "x1"))],
                           {"P": P, "N": N}, ("x0", "x1", "x2"))
        out = reduce_sat_to_conn(psi)
        spurious = out.lift({"x0": 0, "x1": 1, "x2": 1})
        s = "".join(str(spurious[v]) for v in out.formula.variables)
        comps = sg.components(out.formula)
        zero = "0" * len(out.formula.variables)
        home = next(c for c in comps if s in c)
        assert zero not in home
        assert s not in sg.locally_minimal(out.formula)
        trimmed = out.lift({"x0": 0, "x1": 0, "x2": 1})
        t = "".join(str(trimmed[v]) for v in out.formula.variables)
        assert t in sg.locally_minimal(out.formula)
        assert t in home


class TestTandF:
    def test_t_shape(self):
        phi = build_T()
        assert phi.variables == ("u", "v", "w", "x", "y", "z")
        assert [str(c) for c in phi.constraints] == \
            ["M(u,v,w)", "M(x,y,z)", "M(w,w,y)", "M(z,z,v)"]

    def test_t_disconnected_but_projections_connect(self):
        phi = build_T()
        assert sorted(len(c) for c in sg.components(phi)) == [1, 10]
        for i in range(len(phi.constraints)):
            _, proj = sg.project_enumerate(phi, i)
            from relconn.relations import components as rel_components
            assert len(rel_components(proj)) == 1

    def test_t_first_projection_is_m(self):
        vars_, proj = sg.project_enumerate(build_T(), 0)
        assert vars_ == ("u", "v", "w")
        assert proj.members == M.members

    def test_t_two_variable_projection(self):
        # restricted to (w, y) the solutions trace out the implication w -> y
        phi = build_T()
        iw = phi.variables.index("w")
        iy = phi.variables.index("y")
        image = {s[iw] + s[iy] for s in sg.solution_strings(phi)}
        assert image == {"00", "01", "11"}

    def test_f_isolated_solutions(self):
        phi = build_F()
        assert phi.variables == ("x", "y", "z", "w")
        assert sg.solution_strings(phi) == ["0000", "0110", "1001", "1100"]
        assert all(len(c) == 1 for c in sg.components(phi))

    def test_f_projections_connect_the_corners(self):
        phi = build_F()
        from relconn.relations import components as rel_components
        # images of the solutions 0000 and 1100 under each projection
        for i, pair in ((0, ("000", "110")), (1, ("000", "011"))):
            vars_, proj = sg.project_enumerate(phi, i)
            position = {t: j for j, comp in enumerate(rel_components(proj))
                        for t in comp.tuples()}
            assert position[pair[0]] == position[pair[1]]


def relation_of_formula_raw(phi):
    """Enumerate a 3-variable formula by hand; ('x','y','z') order."""
    members = set()
    for bits in itertools.product((0, 1), repeat=3):
        asg = dict(zip(("x", "y", "z"), bits))
        if evaluate_raw(phi.relation_of, phi.constraints, asg):
            members.add((bits[0] << 2) | (bits[1] << 1) | bits[2])
    return frozenset(members)


class TestExpressM:
    def test_m_expresses_itself(self):
        outcome = express_m_details(M)
        assert outcome.shape == "M"
        assert len(outcome.formula.constraints) == 1
        assert relation_of_formula_raw(outcome.formula) == M.members

    def test_conp_formula_relation(self):
        phi = parse_formula(
            "var w x y z\nM(y,0,x)\nM(x,0,y)\nK(x,z,w)\nK(y,z,w)", CATALOG)
        rc = formula_relation(phi)
        assert rc.tuples() == ["0000", "0001", "0110", "0111",
                               "1000", "1110", "1111"]
        outcome = express_m_details(rc)
        assert outcome.shape == "K"
        assert outcome.slots == ("y", "x", "x", "z")
        assert [str(c) for c in outcome.formula.constraints] == \
            ["R(y,x,x,z)", "R(x,z,z,x)"]
        assert relation_of_formula_raw(outcome.formula) == M.members

    def test_k_and_l_fold(self):
        for name in ("K", "L"):
            outcome = express_m_details(CATALOG[name])
            assert outcome.shape == name
            assert len(outcome.formula.constraints) == 2
            assert relation_of_formula_raw(outcome.formula) == M.members

    def test_non_horn_rejected(self):
        with pytest.raises(ExpressionError):
            express_m(CATALOG["R_coNP"])

    def test_safe_relation_rejected(self):
        eq = Relation(2, frozenset({0, 3}))
        with pytest.raises(ExpressionError):
            express_m(eq)

    def test_random_relations(self):
        rng = random.Random(31)
        shapes = set()
        for _ in range(15):
            rel = random_horn_not_safely_cw_ihsb_minus(rng, arity_max=6)
            outcome = express_m_details(rel)
            shapes.add(outcome.shape)
            assert relation_of_formula_raw(outcome.formula) == M.members
            for c in outcome.formula.constraints:
                assert outcome.formula.relation_of(c).members == rel.members
        assert len(shapes) >= 2

    def test_slots_cover_all_coordinates(self):
        rng = random.Random(37)
        for _ in range(8):
            rel = random_horn_not_safely_cw_ihsb_minus(rng, arity_max=5)
            outcome = express_m_details(rel)
            assert len(outcome.slots) == rel.arity
            assert set(outcome.slots) - {"0", "1"} == {"x", "y", "z"}
