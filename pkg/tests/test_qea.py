from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

from vsqe.formula import (EQ, GT, LT, NE, And, Atom, Exists, FalseF, TrueF, evaluate, free_vars,
                          parse, positive_form, to_sexpr)
from vsqe.poly import Polynomial
from vsqe.qea import (QUADRATIC_WITNESSES, BackendConfig, BridgeBackend, BridgeFailure, Kind,
                      HasParameters, MissingCoefficient, NoBackendApplicable, PointfreeBackend,
                      QeQuery, TableEntry, TableFormatError, TablesBackend, all_queries,
                      coefficient_map, decide_pointfree, decide_query, default_tables_dir,
                      format_tables, instantiate, load_tables, parse_tables, payload_truth, qe,
                      qe_instance, relation_mutants, validate_entry)

STUB = Path(__file__).with_name("bridge_stub.py")
x, a, b, c = (Polynomial.var(v) for v in "xabc")
u0, u1, u2 = (Polynomial.var(f"u{i}") for i in range(3))


@pytest.fixture(scope="module")
def tables():
    return load_tables(default_tables_dir())


def bridge(mode: str, timeout: float = 20.0) -> BackendConfig:
    return BackendConfig((BridgeBackend(f"{sys.executable} {STUB} {mode}", timeout),))


def test_shipped_tables_complete(tables):
    for n in (1, 2):
        want = set(all_queries(n))
        have = {q for q in tables if q.n == n}
        assert have == want
    assert len([q for q in tables if q.n == 1]) == 2 + 2 * 6 + 4
    assert len([q for q in tables if q.n == 2]) == 8 + 8 * 6 + 64
    for e in tables.values():
        names = {f"u{i}" for i in range(e.query.n + 1)}
        if e.query.kind is not Kind.GUARD:
            names |= {f"v{i}" for i in range(e.query.n + 1)}
        assert free_vars(e.template) <= names


def test_qe_guard_examples(tables):
    cfg = BackendConfig.default()
    assert qe(QeQuery.guard((-1, 1)), cfg) == And((Atom(u2, GT), Atom(4 * u2 * u0 - u1 ** 2, LT)))
    assert qe(QeQuery.guard((1, 0)), cfg) == And((Atom(u2, EQ), Atom(u1, GT)))
    assert qe(QeQuery.guard((-1,)), cfg) == Atom(u1, LT)


def test_qe_deterministic():
    q = QeQuery.subst((1, -1), NE)
    assert qe(q, BackendConfig.default()) == qe(q, BackendConfig.default())


def test_instantiate_examples(tables):
    t = tables[QeQuery.guard((-1, 1))].template
    assert instantiate(t, {"u2": a, "u1": b, "u0": c}) == \
        And((Atom(a, GT), Atom(4 * a * c - b ** 2, LT)))
    assert instantiate(t, {"u2": 1, "u1": 0, "u0": 1}) == FalseF()
    assert instantiate(t, {"u2": 1, "u1": 0, "u0": -1}) == TrueF()
    with pytest.raises(MissingCoefficient):
        instantiate(t, {"u2": a})


def test_instantiate_renormalizes():
    phi = instantiate(Atom(u1, LT), {"u1": -2 * a})
    assert phi == Atom(a, GT)


def test_coefficient_map():
    assert coefficient_map(1, [a, b]) == {"u1": a, "u0": b}
    assert coefficient_map(1, [a, b], [1, 2]) == {"u1": a, "u0": b, "v1": 1, "v0": 2}
    with pytest.raises(MissingCoefficient):
        coefficient_map(2, [a, b])


def test_decide_pointfree_examples():
    ex = Exists("x", And((Atom(x ** 2 - 3 * x + 2, EQ), Atom(2 * x - 3, LT),
                          Atom(Polynomial.const(2), GT))))
    assert decide_pointfree(ex) == TrueF()
    assert decide_pointfree(Exists("x", And((Atom(x ** 2 + 1, EQ), Atom(2 * x, GT))))) == FalseF()
    assert decide_pointfree(Exists("x", And((Atom(x - 1, EQ), Atom(Polynomial.const(1), GT))))) \
        == TrueF()
    with pytest.raises(HasParameters):
        decide_pointfree(Exists("x", Atom(a * x - 1, EQ)))


def test_structured_decision_matches_payload_oracle():
    rng = random.Random(12)
    for _ in range(300):
        n = rng.choice((1, 2, 3))
        q = rng.choice([qq for qq in all_queries(n) if n < 3 or qq.kind is not Kind.NU][:60])
        pc = [rng.randint(-3, 3) for _ in range(n + 1)]
        qc = None if q.kind is Kind.GUARD else [rng.randint(-3, 3) for _ in range(n + 1)]
        assert decide_query(q, pc, qc) == payload_truth(q, pc, qc)


def test_query_validation():
    with pytest.raises(ValueError):
        QeQuery(Kind.GUARD, 2, ((0, 0),))
    with pytest.raises(ValueError):
        QeQuery(Kind.SUBST, 1, ((1,),))
    with pytest.raises(ValueError):
        QeQuery(Kind.NU, 1, ((1,),))
    assert QeQuery.nu((1,), (-1,)).variables == ["u1", "u0", "v1", "v0"]


def test_guard_table_matches_quadratic_rows(tables):
    rows = {
        (-1, -1): "(and (< u2 0) (< (- (* 4 u2 u0) (^ u1 2)) 0))",
        (-1, 0): "(and (= u2 0) (< u1 0))",
        (-1, 1): "(and (> u2 0) (< (- (* 4 u2 u0) (^ u1 2)) 0))",
        (0, -1): "(and (< u2 0) (= (- (* 4 u2 u0) (^ u1 2)) 0))",
        (0, 1): "(and (> u2 0) (= (- (* 4 u2 u0) (^ u1 2)) 0))",
        (1, -1): "(and (< u2 0) (< (- (* 4 u2 u0) (^ u1 2)) 0))",
        (1, 0): "(and (= u2 0) (> u1 0))",
        (1, 1): "(and (> u2 0) (< (- (* 4 u2 u0) (^ u1 2)) 0))",
    }
    for s, text in rows.items():
        assert positive_form(tables[QeQuery.guard(s)].template) == positive_form(parse(text))


def test_validate_entry_reports(tables):
    rep = validate_entry(tables[QeQuery.guard((0, -1))], 200)
    assert rep.ok and rep.agree == 200
    bad = TableEntry(QeQuery.guard((1, 1)), FalseF())
    rep = validate_entry(bad, 200)
    assert not rep.ok
    assert any(w[0] == {"u2": 1, "u1": -1, "u0": 0} for w in rep.witnesses)
    mutant = next(relation_mutants(tables[QeQuery.guard((0, -1))].template))
    rep = validate_entry(TableEntry(QeQuery.guard((0, -1)), mutant), 200)
    assert rep.disagree >= 1 and rep.witnesses
    assert "FAIL" in str(rep)


def test_every_witness_row_satisfies_its_guard(tables):
    for s, coeffs in QUADRATIC_WITNESSES.items():
        point = dict(zip(("u2", "u1", "u0"), coeffs))
        assert evaluate(tables[QeQuery.guard(s)].template, point)


def test_relation_mutants():
    phi = And((Atom(u1, LT), Atom(u0, EQ)))
    assert list(relation_mutants(phi)) == [And((Atom(u1, LT.negate()), Atom(u0, EQ))),
                                           And((Atom(u1, LT), Atom(u0, NE)))]


# -- table files ---------------------------------------------------------------

def test_table_round_trip(tables):
    entries = [e for e in tables.values() if e.query.n == 1]
    n, back = parse_tables(format_tables(1, entries))
    assert n == 1 and back == entries


@pytest.mark.parametrize("text,where", [
    ("(tables (degree 1) (version 1) (gaurd (signs 1) (formula (> u1 0))))", "gaurd"),
    ("(tables (degree 1) (version 2))", "2"),
    ("(tables (degree 1) (version 1)\n (guard (signs 2) (formula true)))", "2"),
    ("(tables (degree 1) (version 1) (guard (signs 1 1) (formula true)))", None),
    ("(tables (degree 1) (version 1) (guard (signs 1) (formula (> y 0))))", None),
    ("(tables (degree 1) (version 1) (subst (signs 1) (rel ~) (formula true)))", None),
    ("(tables (degree 1) (version 1) (guard (signs 1) (formula (exists (x) true))))", None),
    ("(tables (degree 1) (version 1) (guard (signs 1) (formula true))"
     " (guard (signs 1) (formula true)))", None),
    ("(tables (degree 1) (version 1)", None),
])
def test_malformed_tables(text, where):
    with pytest.raises(TableFormatError) as e:
        parse_tables(text)
    if where:
        # the reported position is that of the offending token
        line_no, line = next((i, ln) for i, ln in enumerate(text.splitlines(), 1) if where in ln)
        assert (e.value.line, e.value.col) == (line_no, line.rindex(where) + 1)


def test_load_tables_reports_file(tmp_path):
    (tmp_path / "bad.tbl").write_text("(tables (degree 1) (version 1) (oops))")
    with pytest.raises(TableFormatError, match="bad.tbl"):
        load_tables(tmp_path)
    assert load_tables(tmp_path / "missing") == {}


def test_tables_env(monkeypatch, tmp_path):
    monkeypatch.setenv("VSQE_TABLES", str(tmp_path))
    assert default_tables_dir() == tmp_path
    assert TablesBackend().degrees == frozenset()


# -- backends ------------------------------------------------------------------

def test_no_backend_applicable():
    cfg = BackendConfig((PointfreeBackend(),))
    with pytest.raises(NoBackendApplicable):
        qe(QeQuery.guard((1, 1)), cfg)
    with pytest.raises(NoBackendApplicable):
        qe_instance(QeQuery.guard((1, 1)), cfg, [a, b, c])
    assert qe_instance(QeQuery.guard((1, 1)), cfg,
                       [Polynomial.const(k) for k in (1, -1, 0)]) == TrueF()
    with pytest.raises(NoBackendApplicable):
        qe(QeQuery.guard((1, 1, 1)), BackendConfig.default())


def test_backend_chain_parsing(tmp_path):
    cfg = BackendConfig.from_chain("tables,pointfree,bridge:prog --opt a,b", tmp_path, 5)
    kinds = [type(bk).__name__ for bk in cfg.backends]
    assert kinds == ["TablesBackend", "PointfreeBackend", "BridgeBackend"]
    assert cfg.backends[2].command == "prog --opt a,b"
    with pytest.raises(ValueError):
        BackendConfig.from_chain("cad")
    with pytest.raises(ValueError):
        BackendConfig(())
    with pytest.raises(ValueError):
        BridgeBackend("prog", timeout=0)


def test_bridge_answers_like_tables(tables):
    cfg = bridge("answer")
    for q in (QeQuery.guard((0, 1)), QeQuery.subst((1,), LT), QeQuery.nu((1, 1), (0, 1))):
        assert qe(q, cfg) == tables[q].template
    # second call is served from the per-backend cache
    assert qe(QeQuery.guard((0, 1)), cfg) == tables[QeQuery.guard((0, 1))].template


@pytest.mark.parametrize("mode,message", [
    ("fail", "status 3"), ("garbage", "does not parse"), ("quantified", "quantifier-free"),
    ("stray", "mentions"),
])
def test_bridge_failures(mode, message):
    with pytest.raises(BridgeFailure, match=message):
        qe(QeQuery.guard((1, 1)), bridge(mode))


def test_bridge_timeout():
    with pytest.raises(BridgeFailure, match="timed out"):
        qe(QeQuery.guard((1, 1)), bridge("hang", timeout=1))


def test_bridge_missing_program():
    cfg = BackendConfig((BridgeBackend("/nonexistent/qe-tool"),))
    with pytest.raises(BridgeFailure):
        qe(QeQuery.guard((1,)), cfg)


def test_payload_grammar_for_bridge():
    text = to_sexpr(QeQuery.guard((1,)).payload)
    assert text == "(exists (x) (and (= (+ u0 (* u1 x)) 0) (> u1 0)))"
