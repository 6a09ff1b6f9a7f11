"""Tests for decoupling, saturation, resonance removal and monodromy."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from vancyc.brieskorn import MicroModule, t_matrix
from vancyc.errors import (
    IrreducibleFactor,
    NonrationalExponent,
    NoStabilization,
    PrecisionExhausted,
)
from vancyc.field import ExtensionPolicy, Matrix
from vancyc.microdiff import (
    analyze_block,
    analyze_module,
    decouple,
    decouple_with_gauge,
    desresonate,
    direct_residue,
    monodromy,
    regularize,
    residue_eigenvalues,
)
from vancyc.mpoly import parse
from vancyc.selftest import random_integer_invertible
from vancyc.series import MatrixSeries, conjugate_constant, gauge, polynomial_gauge

F = Fraction


def test_cusp_has_one_direct_factor() -> None:
    (factor,) = analyze_module(t_matrix(parse("x^2 + y^3")))
    assert factor.critical_value == 0
    assert factor.dimension == 2
    assert factor.exponents == (F(5, 6), F(7, 6))
    assert [b.sizes for b in factor.monodromy] == [(1,), (1,)]
    assert [b.rotation for b in factor.monodromy] == [F(5, 6), F(1, 6)]
    assert factor.route == "direct"
    assert factor.degree == 2


def test_two_morse_points_decouple() -> None:
    module = t_matrix(parse("x^3 - 3*x"))
    blocks = decouple(module)
    assert [b.value for b in blocks] == [F(-2), F(2)]
    assert [b.dim for b in blocks] == [1, 1]
    for block in blocks:
        assert block.module.a0 == Matrix.scalar(1, block.value)
        assert block.module.a(1) == Matrix.scalar(1, F(1, 2))


def test_decoupling_gauge_reproduces_the_blocks() -> None:
    module = t_matrix(parse("x^3 - 3*x"))
    result = decouple_with_gauge(module)
    precision = module.precision
    for k in range(precision + 1):
        assert result.series.coefficient(k).is_diagonal()
    start = conjugate_constant(module.series, result.change_of_basis)
    assert gauge(start, result.gauge).agrees_with(result.series, precision)


def test_decoupling_needs_enough_precision() -> None:
    module = t_matrix(parse("x^2 + y^3"), 3)
    with pytest.raises(PrecisionExhausted):
        decouple(module)


def test_conjugate_critical_values_need_an_extension() -> None:
    module = t_matrix(parse("x^3 - 6*x"))
    assert module.a0 == Matrix.from_rows([[0, -8], [-4, 0]])
    with pytest.raises(IrreducibleFactor):
        analyze_module(module)
    (factor,) = analyze_module(module, ExtensionPolicy.ALLOW_ONE_EXTENSION)
    assert factor.minimal_polynomial == "s^2 - 32"
    assert factor.orbit_size == 2
    assert factor.dimension == 1
    assert factor.exponents == (F(1, 2),)
    payload = factor.to_dict()
    assert payload["critical_value"] == "s"
    assert payload["power_basis"] == ["0", "1"]


def test_saturation_of_a_nilpotent_constant_term() -> None:
    a0 = Matrix.from_rows([[0, 1], [0, 0]])
    a1 = Matrix.from_rows([[F(3, 2), 0], [0, F(1, 4)]])
    module = MicroModule.from_matrices([a0, a1], 6, n_vars=2)
    reg = regularize(module, F(0))
    assert reg.steps == 1
    assert reg.residue == Matrix.from_rows([[F(1, 2), 1], [0, F(1, 4)]])
    (factor,) = analyze_module(module)
    assert factor.route == "saturated"
    assert factor.exponents == (F(1, 4), F(1, 2))


def test_irregular_block_does_not_stabilize() -> None:
    a0 = Matrix.from_rows([[0, 1], [0, 0]])
    a1 = Matrix.from_rows([[0, 0], [1, 0]])
    module = MicroModule.from_matrices([a0, a1], 8, n_vars=1)
    with pytest.raises(NoStabilization):
        regularize(module, F(0))


def test_resonant_residue_is_sheared() -> None:
    r = Matrix.from_rows([[F(-1, 4), 1], [0, F(3, 4)]])
    result = desresonate(r, MatrixSeries.monomial(r, 1).with_precision(6))
    assert result.spectrum == (F(-1, 4), F(3, 4))
    assert result.shift == 1
    assert result.steps == 1
    assert result.residue == Matrix.scalar(2, F(-1, 4))
    factor = monodromy(
        result.residue, F(0), 1, spectrum=result.spectrum, shift=result.shift, route="saturated"
    )
    (block,) = factor.monodromy
    assert block.rotation == F(3, 4)
    assert block.sizes == (1, 1)
    assert block.order == 4
    assert factor.spectrum == (F(-1, 4), F(3, 4))


def test_synthetic_module_end_to_end() -> None:
    r = Matrix.from_rows([[F(-1, 4), 1], [0, F(3, 4)]])
    module = MicroModule.from_matrices([Matrix.zeros(2), r], 6, n_vars=1)
    (factor,) = analyze_module(module)
    assert factor.exponents == (F(-1, 4), F(-1, 4))
    assert factor.shift == 1
    assert factor.route == "saturated"


def test_jordan_block_survives() -> None:
    r = Matrix.from_rows([[F(1, 2), 1], [0, F(1, 2)]])
    factor = monodromy(r, F(0), 1)
    (block,) = factor.monodromy
    assert block.sizes == (2,)
    assert factor.exponents == (F(1, 2), F(1, 2))


def test_irrational_residue_is_diagnosed() -> None:
    with pytest.raises(NonrationalExponent):
        residue_eigenvalues(Matrix.from_rows([[0, 2], [1, 0]]))


@pytest.mark.parametrize("text", ["x^2 + y^3", "x^3 - 3*x"])
def test_result_is_independent_of_the_lattice_basis(text: str) -> None:
    rng = random.Random(7)
    module = t_matrix(parse(text))
    n, precision = module.dim, module.precision
    before = [f.canonical() for f in analyze_module(module)]
    for _ in range(100):
        q = random_integer_invertible(rng, n)
        assert q.rank() == n
        x = Matrix.from_rows(
            [[F(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
        )
        g = MatrixSeries.constant(q) @ polynomial_gauge(x, 1, n)
        moved = module.with_series(gauge(module.series, g, g.inverse_to(precision)))
        assert [f.canonical() for f in analyze_module(moved)] == before


@pytest.mark.parametrize("text", ["x^3 - 3*x", "x^2 + y^2", "x^2 + y^3"])
def test_direct_and_saturated_routes_agree(text: str) -> None:
    for block in decouple(t_matrix(parse(text))):
        assert direct_residue(block.module, block.value) is not None
        direct = analyze_block(block, 2)
        saturated = analyze_block(block, 2, route="saturated")
        assert direct.route == "direct"
        assert saturated.route == "saturated"
        assert direct.canonical() == saturated.canonical()


def test_direct_route_refuses_a_non_scalar_constant_term() -> None:
    a0 = Matrix.from_rows([[0, 1], [0, 0]])
    a1 = Matrix.from_rows([[F(3, 2), 0], [0, F(1, 4)]])
    module = MicroModule.from_matrices([a0, a1], 6, n_vars=2)
    assert direct_residue(module, F(0)) is None
    (block,) = decouple(module)
    with pytest.raises(ValueError):
        analyze_block(block, 2, route="direct")
    assert analyze_block(block, 2).route == "saturated"


def test_resonant_first_order_term_is_not_read_directly() -> None:
    r = Matrix.from_rows([[F(-1, 4), 1], [0, F(3, 4)]])
    module = MicroModule.from_matrices([Matrix.zeros(2), r], 6, n_vars=1)
    assert direct_residue(module, F(0)) is None


def test_thread_count_does_not_change_factors() -> None:
    module = t_matrix(parse("x^3 - 3*x"))
    assert [f.to_dict() for f in analyze_module(module, threads=1)] == [
        f.to_dict() for f in analyze_module(module, threads=4)
    ]
