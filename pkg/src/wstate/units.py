"""Frequency unit handling.

Internally every frequency and rate is an angular frequency in rad/ns and
every time is in ns. Published values are quoted as ordinary frequencies
(``f = omega / 2pi``) in MHz or GHz; the helpers here do the conversion.

Two conventions are supported for turning a quoted ordinary frequency into
an internal rate:

``angular``
    ``omega = 2pi * f``. This is the physical reading of ``omega/2pi = f``.
``no_2pi``
    ``omega = f`` (with f expressed in GHz, i.e. cycles/ns). The quoted
    number is used directly as an angular rate in rad/ns. Published
    numerical results of the three-level W-state emitter are reproduced
    under this reading.
"""

import math

TWO_PI = 2.0 * math.pi

CONVENTIONS = ("angular", "no_2pi")


def _check(convention):
    if convention not in CONVENTIONS:
        raise ValueError(
            f"unknown frequency convention {convention!r}; "
            f"expected one of {CONVENTIONS}")


def mhz_to_rad_per_ns(f_mhz, convention="angular"):
    """Convert an ordinary frequency in MHz to an internal rate in rad/ns."""
    _check(convention)
    if convention == "angular":
        return TWO_PI * f_mhz * 1e-3
    return f_mhz * 1e-3


def rad_per_ns_to_mhz(omega, convention="angular"):
    """Inverse of :func:`mhz_to_rad_per_ns`."""
    _check(convention)
    if convention == "angular":
        return omega / TWO_PI * 1e3
    return omega * 1e3


def ghz_to_rad_per_ns(f_ghz, convention="angular"):
    return mhz_to_rad_per_ns(f_ghz * 1e3, convention)


def rad_per_ns_to_ghz(omega, convention="angular"):
    return rad_per_ns_to_mhz(omega, convention) * 1e-3
