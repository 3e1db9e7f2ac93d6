import logging
import time
from fractions import Fraction
from typing import List, Optional, Tuple

from annulus import AnnulusElement, apply_meridian
from reporting import VerificationReport, build_report
from scalars import Scalar, quantum_bracket, unknot_value
from symfun import POWER, SCHUR, Partition, SymSeries, hooks_contents, multiply, partitions_up_to, series_exp

logger = logging.getLogger(__name__)


def _xi(xi: Optional[Scalar]) -> Scalar:
    if xi is None:
        return Scalar.var('xi')
    return xi if isinstance(xi, Scalar) else Scalar.const(xi)


def psi_coefficient(lam: Partition, xi: Optional[Scalar] = None) -> Scalar:
    """Π_□ (-s^{-c} ξ) / {h}."""
    xi = _xi(xi)
    value = Scalar.one()
    for c, h in hooks_contents(lam):
        value = value * (-Scalar.s_power(-c)) * xi / quantum_bracket(h)
    return value


def psi_product_form(max_degree: int, xi: Optional[Scalar] = None) -> AnnulusElement:
    """Ψ[ξ] from the hook-content product, truncated at |λ| ≤ N."""
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    return SymSeries(SCHUR, {lam: psi_coefficient(lam, xi) for lam in partitions_up_to(max_degree)}, max_degree)


def psi_exp_form(max_degree: int, xi: Optional[Scalar] = None) -> AnnulusElement:
    """Ψ[ξ] = exp(-Σ_d ξ^d p_d / (d{d})), converted to the Schur basis."""
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    xi = _xi(xi)
    log = SymSeries(POWER, {
        Partition.of(d): -(xi ** d) / (quantum_bracket(d) * d) for d in range(1, max_degree + 1)
    }, max_degree)
    return series_exp(log).to_schur()


def psi_inverse(max_degree: int) -> AnnulusElement:
    """Ψ^{-1} = Σ_λ Π_□ s^c/{h} W_λ (at ξ = 1)."""
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    coeffs = {}
    for lam in partitions_up_to(max_degree):
        value = Scalar.one()
        for c, h in hooks_contents(lam):
            value = value * Scalar.s_power(c) / quantum_bracket(h)
        coeffs[lam] = value
    return SymSeries(SCHUR, coeffs, max_degree)


def _by_degree(residual: SymSeries, max_degree: int) -> List[Tuple[str, SymSeries]]:
    return [(f"degree {d}", residual.degree_part(d)) for d in range(max_degree + 1)]


def recurrence_residual(psi: AnnulusElement, orientation: int, coupling: Scalar) -> AnnulusElement:
    """(○ - P_{±1,0} - coupling·P_{0,1}) applied to a series."""
    p1 = SymSeries.basis_element(Partition.of(1), SCHUR, psi.max_degree)
    return (psi.scale(unknot_value('a'))
            - apply_meridian(psi, orientation)
            - multiply(p1, psi).scale(coupling))


def verify_recurrence(max_degree: int) -> VerificationReport:
    """Check (○ - P_{1,0} - aξP_{0,1})Ψ[ξ] = 0 degree by degree."""
    if max_degree < 1:
        raise ValueError("verify_recurrence needs max_degree >= 1")
    started = time.perf_counter()
    psi = psi_product_form(max_degree)
    residual = recurrence_residual(psi, 1, Scalar.var('a') * Scalar.var('xi'))
    return build_report('dilog recurrence', max_degree, _by_degree(residual, max_degree), started)


def verify_inverse_recurrence(max_degree: int) -> VerificationReport:
    """Check (○ - P_{-1,0} - a^{-1}P_{0,1})Ψ^{-1} = 0 degree by degree."""
    if max_degree < 1:
        raise ValueError("verify_inverse_recurrence needs max_degree >= 1")
    started = time.perf_counter()
    inverse = psi_inverse(max_degree)
    residual = recurrence_residual(inverse, -1, Scalar.var('a', -1))
    return build_report('dilog inverse recurrence', max_degree, _by_degree(residual, max_degree), started)


def verify_product_vs_exp(max_degree: int) -> VerificationReport:
    started = time.perf_counter()
    residual = psi_product_form(max_degree) - psi_exp_form(max_degree)
    return build_report('dilog product = exp', max_degree, _by_degree(residual, max_degree), started)


def verify_inverse_product(max_degree: int) -> VerificationReport:
    """Ψ[1]·Ψ^{-1} = 1 in the annulus."""
    started = time.perf_counter()
    product = multiply(psi_product_form(max_degree, Scalar.one()), psi_inverse(max_degree))
    residual = product - SymSeries.unit(SCHUR, max_degree)
    return build_report('dilog inverse', max_degree, _by_degree(residual, max_degree), started)


def xi_homogeneity_failures(psi: AnnulusElement) -> List[Partition]:
    """Partitions whose coefficient is not ξ^{|λ|} times a ξ-free scalar."""
    return [lam for lam, c in psi.coeffs.items() if c.degree_in('xi') != Fraction(lam.size)]


def dilog_report(max_degree: int, which: str = 'all') -> List[VerificationReport]:
    checks = {
        'product': verify_product_vs_exp,
        'exp': verify_product_vs_exp,
        'inverse': verify_inverse_product,
        'recurrence': verify_recurrence,
        'inverse-recurrence': verify_inverse_recurrence,
    }
    if which == 'all':
        names = ['product', 'inverse', 'recurrence', 'inverse-recurrence']
    elif which in checks:
        names = [which]
    else:
        raise ValueError(f"Unsupported dilog check: {which}. Choose from {['all'] + list(checks.keys())}")
    logger.info("Running dilogarithm checks %s to degree %d", names, max_degree)
    return [checks[name](max_degree) for name in names]
