"""Momentum grids for the conduction band.

Conventions used everywhere in this package:

* levels are labelled by nonzero signed integers k = -L..-1, 1..L and the
  single impurity level "d";
* the one-particle basis is ordered (k=-L, ..., -1, +1, ..., +L, d), i.e. the
  impurity sits in the last slot;
* the band is reflection symmetric, omega(-k) = -omega(k), and only the
  positive branch is stored.  The negative branch is produced by negation, so
  the symmetry holds bitwise.

Grids are immutable after construction; derived arrays are computed once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridSpecError

# How far omega_L/L may stray from the slope before we attach a warning note.
_ASYMPTOTIC_RTOL = 0.10


@dataclass(frozen=True)
class MomentumGrid:
    """Positive-branch dispersion table plus bookkeeping.

    Attributes
    ----------
    lam : int
        Band cutoff L (number of positive levels).
    c : float
        Nominal slope of the dispersion (energy spacing for linear grids).
    omega_pos : ndarray, shape (lam,)
        Energies of the positive branch, strictly increasing, all > 0.
    linear : bool
        True when omega_pos is exactly c * (1..lam).
    notes : tuple of str
        Non-fatal warnings attached at construction time.
    """

    lam: int
    c: float
    omega_pos: np.ndarray
    linear: bool
    notes: tuple = ()
    _omega_signed: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        om = np.asarray(self.omega_pos, dtype=float)
        if self.lam < 1:
            raise GridSpecError(f"need at least one level, got lam={self.lam}")
        if self.c <= 0 or not np.isfinite(self.c):
            raise GridSpecError(f"slope must be positive and finite, got {self.c}")
        if om.shape != (self.lam,):
            raise GridSpecError(
                f"energy table has length {om.size}, expected lam={self.lam}")
        if not np.all(np.isfinite(om)):
            raise GridSpecError("energy table contains non-finite entries")
        if om[0] <= 0.0:
            raise GridSpecError(f"energies must be strictly positive, got {om[0]}")
        if np.any(np.diff(om) <= 0.0):
            i = int(np.argmin(np.diff(om)))
            raise GridSpecError(
                f"energies must be strictly increasing; table stalls at "
                f"index {i} ({om[i]} -> {om[i + 1]})")
        om.setflags(write=False)
        object.__setattr__(self, "omega_pos", om)
        signed = np.concatenate([-om[::-1], om])
        signed.setflags(write=False)
        object.__setattr__(self, "_omega_signed", signed)

    # -- derived views ----------------------------------------------------

    @property
    def dim(self) -> int:
        """Size of the one-particle basis, 2*lam + 1."""
        return 2 * self.lam + 1

    @property
    def omega_signed(self) -> np.ndarray:
        """Energies for k = -lam..-1, 1..lam in basis order (impurity excluded)."""
        return self._omega_signed

    @property
    def momenta_signed(self) -> np.ndarray:
        """Signed level labels aligned with omega_signed."""
        k = np.concatenate([np.arange(-self.lam, 0), np.arange(1, self.lam + 1)])
        return k

    @property
    def index_d(self) -> int:
        """Basis index of the impurity level."""
        return 2 * self.lam

    def index(self, k) -> int:
        """Basis index of level k (signed nonzero int) or of the impurity 'd'."""
        if k == "d":
            return self.index_d
        k = int(k)
        if k == 0 or abs(k) > self.lam:
            raise GridSpecError(f"level {k} outside grid with lam={self.lam}")
        return k + self.lam if k < 0 else k + self.lam - 1

    def omega(self, k) -> float:
        """Energy of level k; omega('d') = 0."""
        if k == "d":
            return 0.0
        return float(self._omega_signed[self.index(k)])


def _asymptotic_note(om, lam, c):
    ratio = om[-1] / (c * lam)
    if abs(ratio - 1.0) > _ASYMPTOTIC_RTOL:
        return (f"omega_L/(c*L) = {ratio:.4g} deviates from 1 by more than "
                f"{_ASYMPTOTIC_RTOL:.0%}; continuum formulas assume an "
                f"asymptotically linear band",)
    return ()


def build_linear_grid(lam: int, c: float = 1.0) -> MomentumGrid:
    """Evenly spaced band omega_k = c*k for k = 1..lam."""
    if lam < 1:
        raise GridSpecError(f"need at least one level, got lam={lam}")
    if c <= 0 or not np.isfinite(c):
        raise GridSpecError(f"slope must be positive and finite, got {c}")
    om = c * np.arange(1, lam + 1, dtype=float)
    return MomentumGrid(lam=int(lam), c=float(c), omega_pos=om, linear=True)


def build_custom_grid(energies, c: float = 1.0) -> MomentumGrid:
    """Band from an explicit positive-branch energy table.

    The table must be strictly increasing and positive.  If the top of the
    band strays from c*L by more than 10% a note is attached (continuum-limit
    helpers quietly assume near-linear growth) but the grid is still usable.
    """
    om = np.array(energies, dtype=float).ravel()
    if om.size == 0:
        raise GridSpecError("energy table is empty")
    grid = MomentumGrid(lam=om.size, c=float(c), omega_pos=om,
                        linear=bool(np.array_equal(om, c * np.arange(1, om.size + 1))),
                        notes=_asymptotic_note(om, om.size, c))
    return grid


def read_grid_config(path) -> MomentumGrid:
    """Build a grid from a plain-text key=value file.

    Recognised keys (one per line, '#' starts a comment):

        lambda   = 50            # band cutoff, required unless energies given
        slope    = 1.0           # optional, default 1.0
        energies = 1.0, 2.1, ... # optional explicit positive branch

    When `energies` is present the grid is custom; a `lambda` line, if also
    present, must match the table length.
    """
    keys = {}
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise GridSpecError(f"cannot read grid file: {exc}") from None
    with fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise GridSpecError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            key = key.lower()
            if key in keys:
                raise GridSpecError(f"{path}:{lineno}: duplicate key '{key}'")
            keys[key] = (val, lineno)

    unknown = set(keys) - {"lambda", "slope", "energies"}
    if unknown:
        raise GridSpecError(f"{path}: unknown keys {sorted(unknown)}")

    try:
        slope = float(keys["slope"][0]) if "slope" in keys else 1.0
    except ValueError as exc:
        raise GridSpecError(f"{path}: bad slope: {exc}") from None

    if "energies" in keys:
        raw = keys["energies"][0].replace(",", " ")
        try:
            table = [float(tok) for tok in raw.split()]
        except ValueError as exc:
            raise GridSpecError(f"{path}: bad energies entry: {exc}") from None
        if not table:
            raise GridSpecError(f"{path}: energies key given but empty")
        if "lambda" in keys:
            try:
                stated = int(keys["lambda"][0])
            except ValueError as exc:
                raise GridSpecError(f"{path}: bad lambda: {exc}") from None
            if stated != len(table):
                raise GridSpecError(
                    f"{path}: lambda = {stated} but energies has "
                    f"{len(table)} entries")
        return build_custom_grid(table, c=slope)

    if "lambda" not in keys:
        raise GridSpecError(f"{path}: need either 'lambda' or 'energies'")
    try:
        lam = int(keys["lambda"][0])
    except ValueError as exc:
        raise GridSpecError(f"{path}: bad lambda: {exc}") from None
    return build_linear_grid(lam, c=slope)
