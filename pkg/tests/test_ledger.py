from fractions import Fraction

import pytest

from relfree.errors import (
    BrokenChainOrder,
    EmptyInput,
    InvalidParams,
    NonPositiveParameter,
    Unsatisfiable,
)
from relfree.ledger import (
    InequalityCatalog,
    LppAssignment,
    PARAM_NAMES,
    bound_f,
    bound_TU,
    load_default_catalog,
    parse_assignment_text,
    period_floor,
    solve,
    verify,
)


def chain(**overrides) -> LppAssignment:
    base = dict(alpha=Fraction(1, 2), beta=Fraction(1, 4), gamma=Fraction(1, 8),
                delta=Fraction(1, 20), eps=Fraction(1, 40), zeta=Fraction(1, 160),
                eta=Fraction(1, 320), iota=Fraction(1, 640))
    base.update(overrides)
    return LppAssignment(**base)


# -- catalog parsing -----------------------------------------------------------

def test_default_catalog_loads():
    cat = load_default_catalog()
    assert len(cat.items) >= 25
    ids = [item.id for item in cat.items]
    for anchored in ("L1_f_bound", "L12_T3", "L12_T2_step", "L11_half_n",
                     "L2_BC_below_D"):
        assert anchored in ids


def test_least_parameter_assignment():
    cat = load_default_catalog()
    by_id = {item.id: item for item in cat.items}
    assert by_id["L1_f_bound"].least_param == "iota"
    assert by_id["L12_T3"].least_param == "iota"
    assert by_id["L7_compat_margin"].least_param == "zeta"
    assert by_id["L2_BC_below_D"].least_param == "eta"
    assert by_id["L4_WG_len"].least_param == "zeta"


def test_catalog_rejects_malformed_lines():
    with pytest.raises(InvalidParams):
        InequalityCatalog.from_text("only_two_fields | n > 1")
    with pytest.raises(InvalidParams):
        InequalityCatalog.from_text("x | n > sneaky_name | anchor")
    with pytest.raises(InvalidParams):
        InequalityCatalog.from_text("x | n + 1 | anchor")  # not an inequality
    with pytest.raises(InvalidParams):
        InequalityCatalog.from_text("x | __import__('os') > 1 | anchor")
    with pytest.raises(InvalidParams):
        InequalityCatalog.from_text(
            "a | n > 1 | anchor\na | n > 2 | anchor")  # duplicate id


def test_expression_evaluation_is_exact():
    cat = InequalityCatalog.from_text("x | zeta^-2 > 100*d/3 | anchor")
    a = chain()
    rep = verify(a, cat)
    item = rep.item_results[0]
    assert item.lhs == Fraction(160) ** 2
    assert item.rhs == Fraction(100 * 320, 3)
    assert item.passed


# -- verify ---------------------------------------------------------------------

def test_verify_flags_exactly_the_violated_item():
    cat = InequalityCatalog.from_text(
        "L1_f_bound | n^2 > 100*(n+h)/zeta | Lemma 1\n"
        "L12_T2_step | (h-1)*n*(d+1) > (h-1)*n*d | Lemma 12")
    bad = chain(eta=Fraction(1, 200), iota=Fraction(1, 201))
    rep = verify(bad, cat)
    assert rep.failed_ids() == ["L1_f_bound"]
    assert not rep.passed


def test_verify_raises_on_nonpositive():
    with pytest.raises(NonPositiveParameter):
        verify(chain(iota=Fraction(0)), load_default_catalog())


def test_verify_raises_on_broken_chain():
    with pytest.raises(BrokenChainOrder):
        verify(chain(beta=Fraction(3, 4)), load_default_catalog())


def test_verify_reports_divisibility():
    rep = verify(chain(delta=Fraction(1, 30)), InequalityCatalog.from_text(
        "t | d > 1 | anchor"))
    assert any("multiple of 20" in p for p in rep.structural_problems)
    assert not rep.passed


def test_verify_reports_non_integer_parameters():
    rep = verify(chain(iota=Fraction(2, 641)), InequalityCatalog.from_text(
        "t | d > 1 | anchor"))
    assert any("not an integer" in p for p in rep.structural_problems)


def test_verify_rejects_empty_catalog():
    with pytest.raises(EmptyInput):
        verify(chain(), InequalityCatalog(()))


# -- solve -----------------------------------------------------------------------

def test_solve_default_catalog_round_trips():
    cat = load_default_catalog()
    assign = solve(cat)
    rep = verify(assign, cat)
    assert rep.passed
    assert assign.h == 20
    assert assign.h % 20 == 0
    assert assign.d > assign.h
    assert assign.n > assign.d


def test_solve_empty_catalog_gives_minimal_chain():
    assign = solve(InequalityCatalog(()))
    assign.check_structure()
    assert assign.integrality_problems() == []
    assert assign.h == 20
    values = [getattr(assign, name) for name in PARAM_NAMES]
    assert values == sorted(values, reverse=True)


def test_solve_pinned_singleton_matches_linear_scan():
    single = InequalityCatalog.from_text("L1 | n^2 > 100*(n+h)/zeta | Lemma 1")
    assign = solve(single, fixed={"zeta": Fraction(1, 100), "h": 20})
    n = assign.d + 1
    while not n * n > 100 * 100 * (n + 20):
        n += 1
    assert assign.n == n == 10020


def test_solve_prefixes_round_trip():
    cat = load_default_catalog()
    for k in range(1, len(cat.items) + 1):
        prefix = cat.prefix(k)
        assign = solve(prefix)
        assert verify(assign, prefix).passed


def test_solve_reports_blocking_item():
    impossible = InequalityCatalog.from_text("never | zeta > 1 | anchor")
    with pytest.raises(Unsatisfiable) as exc:
        solve(impossible)
    assert exc.value.item_id == "never"


def test_monotone_safety_for_iota_items():
    # shrinking iota (growing n) keeps every iota-anchored item satisfied
    cat = load_default_catalog()
    assign = solve(cat)
    items = cat.by_least_param("iota")
    for factor in (2, 16, 1024):
        env = assign.environment()
        env["iota"] = assign.iota / factor
        env["n"] = 1 / env["iota"]
        for item in items:
            ok, _, _ = item.evaluate(env)
            assert ok, item.id


# -- assignment files and bounds ---------------------------------------------------

def test_assignment_text_round_trip(tmp_path):
    from relfree.ledger import load_assignment, save_assignment

    assign = chain()
    path = tmp_path / "assign.txt"
    save_assignment(assign, path)
    assert load_assignment(path) == assign


def test_assignment_parse_errors():
    with pytest.raises(InvalidParams):
        parse_assignment_text("alpha = 1/2")  # missing the rest
    with pytest.raises(InvalidParams):
        parse_assignment_text("omega = 1/2")


def test_bound_f_example():
    assert bound_f(chain(zeta=Fraction(1, 100), eta=Fraction(1, 320))) == 10_000


def test_bound_TU_example():
    a = chain()
    d = a.d
    assert bound_TU(d + 1, a) == d * (d + 1)
    assert period_floor(a) == d
