"""Memory kernels of the exact amplitude equations.

The amplitudes obey

    c_n(t) = c_n(0) + (2 i Gamma0 / pi) sum_{n' m m'} int_0^t c_n'(tau) K(phi, omega0 (t - tau)) dtau

with the dimensionless kernel

    K(phi, s) = int_0^L dz w(z) cos(z phi) (1 - exp(i (1 - z) s)) / (z - 1).

Partial fractions of ``w(z)/(z - 1)`` split it into a pole part K1 (1/(z-1)),
a shifted part K2 (1/(z+1)) and a double-pole part K3 (1/(z+1)^2), with
``K = K1 - K2 - 2 K3`` (const) and ``K = K1 - K2 + 2 K3`` (lin).  Each part
is integrated in closed form below; :func:`oracle_kernel` does the same
z-integral by adaptive quadrature.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from ._moments import inv2_moment, inv_moment, shifted_pole, weight_transform


def kernel_parts(phase, lag, cutoff, double_pole: bool = True):
    """Return (K1, K2, K3) as complex arrays broadcast over phase and lag.

    ``double_pole=False`` skips K3 and returns zeros in its place.
    """
    phase, lag = np.broadcast_arrays(np.asarray(phase, float), np.asarray(lag, float))
    k1 = np.zeros(phase.shape, complex)
    k2 = np.zeros(phase.shape, complex)
    k3 = np.zeros(phase.shape, complex)
    shift = np.exp(2j * lag)
    for s in (1.0, -1.0):
        a = s * phase
        b = a - lag
        k1 += np.exp(1j * a) * (
            shifted_pole(a, -1.0, cutoff - 1.0) - shifted_pole(b, -1.0, cutoff - 1.0)
        )
        back = np.exp(-1j * a)
        k2 += back * (inv_moment(a, cutoff) - shift * inv_moment(b, cutoff))
        if double_pole:
            k3 += back * (inv2_moment(a, cutoff) - shift * inv2_moment(b, cutoff))
    return k1 / 8.0, k2 / 8.0, k3 / 8.0


def kernel_K(model: str, phase, lag, cutoff):
    """Combined kernel K1 - K2 -/+ 2 K3 for the const / lin model."""
    if model not in ("const", "lin"):
        raise ValueError(f"unknown model {model!r}")
    if np.any(np.asarray(lag) < 0) or np.any(np.asarray(phase) < 0):
        raise ValueError("phase and lag must be non-negative")
    if not cutoff > 1:
        raise ValueError("cutoff ratio must exceed 1")
    k1, k2, k3 = kernel_parts(phase, lag, cutoff)
    sign = -2.0 if model == "const" else 2.0
    out = k1 - k2 + sign * k3
    return out[()] if out.ndim == 0 else out


def field_primitive(distance, lag, cutoff):
    """Antiderivative in s of the emitted-field kernel of the const model.

    S(r, s) = int_0^L cos(z r) exp(-i (z - 1) s) / (1 + z) dz is the
    amplitude a leg at phase distance r contributes per unit source
    amplitude at lag s.  Its integral from 0 to s equals
    -2 i (K1 - K2)(|r|, s), since 1/((1 + z)(z - 1)) = (1/(z - 1) - 1/(z + 1)) / 2.
    """
    k1, k2, _ = kernel_parts(np.abs(distance), lag, cutoff, double_pole=False)
    out = -2j * (k1 - k2)
    return out[()] if out.ndim == 0 else out


def memory_kernel(model: str, phase, lag, cutoff):
    """dK/ds = i int_0^L w cos(z phi) exp(i (1 - z) s) dz."""
    out = 1j * weight_transform(model, phase, lag, cutoff)
    return out[()] if np.ndim(out) == 0 else out


def _weight(model: str):
    if model == "const":
        return lambda z: 1.0 / (1.0 + z) ** 2
    return lambda z: z / (1.0 + z) ** 2


class QuadratureError(RuntimeError):
    pass


def oracle_kernel(model: str, phase: float, lag: float, cutoff: float, rtol: float = 1e-10) -> complex:
    """Direct adaptive quadrature of the kernel's z-integral.

    [0, z_split] is integrated with ordinary Gauss-Kronrod panels split at the
    removable point z = 1 and at the oscillation scale; the tail up to the
    cutoff uses QUADPACK's Fourier-weighted rule for each frequency.  Any
    QUADPACK warning is raised as :class:`QuadratureError`.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            return _oracle(model, phase, lag, cutoff, rtol)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(
                f"quadrature failed at model={model} phase={phase} lag={lag} cutoff={cutoff}: {exc}"
            ) from exc


def _oracle(model, phase, lag, cutoff, rtol):
    w = _weight(model)

    def near(z):
        u = z - 1.0
        x = u * lag
        # (1 - exp(-i u s)) / u written without cancellation
        if abs(x) < 1e-8:
            ratio = complex(lag * x / 2.0, lag)
        else:
            half = 0.5 * x
            sinc_half = np.sin(half) / half
            ratio = complex(lag * half * sinc_half**2, np.sin(x) / u)
        return w(z) * np.cos(z * phase) * ratio

    z_split = min(4.0, cutoff)
    freq = max(phase + lag, 1.0)
    n_panels = int(np.ceil(z_split * freq / np.pi)) + 1
    edges = np.unique(np.concatenate([np.linspace(0.0, z_split, n_panels + 1), [1.0]]))
    edges = edges[edges <= z_split]
    total = 0.0 + 0.0j
    for lo, hi in zip(edges[:-1], edges[1:]):
        re, _ = integrate.quad(lambda z: near(z).real, lo, hi, epsabs=1e-14, epsrel=rtol, limit=200)
        im, _ = integrate.quad(lambda z: near(z).imag, lo, hi, epsabs=1e-14, epsrel=rtol, limit=200)
        total += complex(re, im)
    if cutoff > z_split:
        total += _tail(w, phase, lag, z_split, cutoff, rtol)
    return complex(total)


def _oscillatory(f, omega: float, lo: float, hi: float, kind: str, rtol: float) -> float:
    """int_lo^hi f(z) cos(omega z) dz or the sin counterpart."""
    if omega == 0.0:
        if kind == "sin":
            return 0.0
        val, _ = integrate.quad(f, lo, hi, epsabs=1e-14, epsrel=rtol, limit=500)
        return val
    sign = -1.0 if (omega < 0 and kind == "sin") else 1.0
    val, _ = integrate.quad(f, lo, hi, weight=kind, wvar=abs(omega), epsabs=1e-14,
                            epsrel=rtol, limit=2000)
    return sign * val


def _tail(w, phase, lag, lo, hi, rtol):
    # w cos(z phi) (1 - e^{i s} e^{-i s z}) / (z - 1); the second cosine
    # splits as cos(z phi) e^{-i s z} = [e^{i z (phi - s)} + e^{-i z (phi + s)}] / 2
    g = lambda z: w(z) / (z - 1.0)  # noqa: E731
    direct = _oscillatory(g, phase, lo, hi, "cos", rtol)
    acc = 0.0 + 0.0j
    for freq in (phase - lag, -(phase + lag)):
        acc += 0.5 * complex(
            _oscillatory(g, freq, lo, hi, "cos", rtol), _oscillatory(g, freq, lo, hi, "sin", rtol)
        )
    return direct - np.exp(1j * lag) * acc


@dataclass(frozen=True)
class KernelCheck:
    model: str
    phase: float
    lag: float
    cutoff: float
    closed_form: complex
    oracle: complex

    @property
    def error(self) -> float:
        return abs(self.closed_form - self.oracle)


def random_kernel_checks(samples: int, seed: int, rtol: float = 1e-10) -> list[KernelCheck]:
    """Compare kernel_K with oracle_kernel at seeded random points.

    Phases are drawn from [0, 3 pi], lags from [0, 50] and the cutoff ratio
    from {1e2, 1e4}.  Each draw is checked for both models.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = np.random.default_rng(seed)
    phases = rng.uniform(0.0, 3.0 * np.pi, samples)
    lags = rng.uniform(0.0, 50.0, samples)
    cutoffs = rng.choice([1e2, 1e4], samples)
    out = []
    for phase, lag, cutoff in zip(phases, lags, cutoffs):
        for model in ("const", "lin"):
            out.append(
                KernelCheck(
                    model, float(phase), float(lag), float(cutoff),
                    complex(kernel_K(model, phase, lag, cutoff)),
                    oracle_kernel(model, phase, lag, cutoff, rtol),
                )
            )
    return out
