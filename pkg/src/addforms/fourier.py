"""Characters, Fourier transform, convolution and Parseval machinery on a
finite abelian group.

Everything here is double precision and expectation-normalized; the exact
counting path in `abelian` stays authoritative, this module verifies it
spectrally.  Summations use fixed ordering so repeated runs are bit-identical.
"""

from __future__ import annotations

import cmath
from typing import Callable, Sequence, Union

import numpy as np

from .abelian import FiniteAbelianGroup, GroupElement, GroupSubset
from .errors import CapExceeded, GroupMismatchError

# O(|G|^2) transforms; refuse beyond this to keep the CLI safe.
DEFAULT_MAX_TRANSFORM_ORDER = 1 << 14

_CHUNK_ROWS = 1 << 8

FunctionLike = Union[GroupSubset, Sequence[complex], np.ndarray, Callable]


class Spectrum:
    """Fourier coefficients of a function on a group, indexed like elements."""

    __slots__ = ("group", "coefficients")

    def __init__(self, group: FiniteAbelianGroup, coefficients: np.ndarray):
        coefficients = np.asarray(coefficients, dtype=np.complex128).copy()
        if coefficients.shape != (group.order,):
            raise ValueError(f"spectrum must have length {group.order}")
        coefficients.flags.writeable = False
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "coefficients", coefficients)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("Spectrum is immutable")

    def __getitem__(self, xi: Union[GroupElement, int]) -> complex:
        if isinstance(xi, GroupElement):
            if xi.group != self.group:
                raise GroupMismatchError("frequency from a different group")
            return complex(self.coefficients[xi.index()])
        return complex(self.coefficients[xi])

    def __len__(self) -> int:
        return self.group.order


def character(xi: GroupElement, x: GroupElement) -> complex:
    """chi_xi(x) = exp(2 pi i sum_t xi_t x_t / n_t); unit modulus."""
    if xi.group != x.group:
        raise GroupMismatchError("character arguments from different groups")
    phase = sum(
        a * b / n for a, b, n in zip(xi.residues, x.residues, xi.group.moduli)
    )
    return cmath.exp(2j * cmath.pi * phase)


def function_values(group: FiniteAbelianGroup, f: FunctionLike) -> np.ndarray:
    """Materialize a function on G as a complex array over element indices."""
    if isinstance(f, GroupSubset):
        if f.group != group:
            raise GroupMismatchError("subset from a different group")
        return f.bits.astype(np.complex128)
    if callable(f):
        return np.array([complex(f(g)) for g in group], dtype=np.complex128)
    values = np.asarray(f, dtype=np.complex128)
    if values.shape != (group.order,):
        raise ValueError(f"function table must have length {group.order}")
    return values


def _check_transform_order(group: FiniteAbelianGroup) -> None:
    if group.order > DEFAULT_MAX_TRANSFORM_ORDER:
        raise CapExceeded(
            f"direct transform is O(|G|^2); order {group.order} exceeds "
            f"{DEFAULT_MAX_TRANSFORM_ORDER}"
        )


def _phase_block(group: FiniteAbelianGroup, rows: np.ndarray) -> np.ndarray:
    """Phase matrix sum_t rows_t * x_t / n_t over all x, shape (len(rows), |G|)."""
    total = np.zeros((rows.size, group.order), dtype=np.float64)
    for t, n in enumerate(group.moduli):
        rt = group.residue_table(t)
        total += np.multiply.outer(rt[rows] / n, rt.astype(np.float64))
    return total


def fourier_transform(f: FunctionLike, group: FiniteAbelianGroup | None = None) -> Spectrum:
    """Expectation-normalized transform: fhat(xi) = E_x f(x) conj(chi_xi(x))."""
    if group is None:
        if not isinstance(f, GroupSubset):
            raise ValueError("group required unless f is a GroupSubset")
        group = f.group
    _check_transform_order(group)
    values = function_values(group, f)
    out = np.empty(group.order, dtype=np.complex128)
    for start in range(0, group.order, _CHUNK_ROWS):
        rows = np.arange(start, min(start + _CHUNK_ROWS, group.order), dtype=np.int64)
        w = np.exp(-2j * np.pi * _phase_block(group, rows))
        out[rows] = w @ values / group.order
    return Spectrum(group, out)


def convolve(f: FunctionLike, g: FunctionLike, group: FiniteAbelianGroup) -> np.ndarray:
    """(f * g)(x) = E_y f(x - y) g(y), returned as an array over element indices."""
    _check_transform_order(group)
    fv = function_values(group, f)
    gv = function_values(group, g)
    out = np.empty(group.order, dtype=np.complex128)
    all_idx = np.arange(group.order, dtype=np.int64)
    for start in range(0, group.order, _CHUNK_ROWS):
        rows = np.arange(start, min(start + _CHUNK_ROWS, group.order), dtype=np.int64)
        if group.moduli:
            cols = [
                (group.residue_table(t)[rows][:, None] - group.residue_table(t)[all_idx][None, :])
                % n
                for t, n in enumerate(group.moduli)
            ]
            diff = group.encode_columns(cols)
        else:
            diff = np.zeros((rows.size, group.order), dtype=np.int64)
        out[rows] = (fv[diff] * gv[None, :]).sum(axis=1) / group.order
    if np.abs(out.imag).max(initial=0.0) == 0.0:
        return out.real
    return out


def parseval_check(f: FunctionLike, group: FiniteAbelianGroup | None = None) -> tuple[float, float]:
    """Both sides of sum_xi |fhat(xi)|^2 = E_x |f(x)|^2."""
    if group is None:
        if not isinstance(f, GroupSubset):
            raise ValueError("group required unless f is a GroupSubset")
        group = f.group
    spectrum = fourier_transform(f, group)
    lhs = float((np.abs(spectrum.coefficients) ** 2).sum())
    values = function_values(group, f)
    rhs = float((np.abs(values) ** 2).sum() / group.order)
    return lhs, rhs


def energy_fourier(a: GroupSubset) -> float:
    """Normalized additive energy computed spectrally: sum_xi |Ahat(xi)|^4."""
    spectrum = fourier_transform(a)
    mags = np.abs(spectrum.coefficients)
    return float((mags**4).sum())
