"""Disorder ensembles and parameter sweeps.

Realization ``i`` always uses ``derive_seed(master_seed, i)`` and results are
reduced in index order, so the output does not depend on how (or how many)
workers evaluated the realizations.
"""

from __future__ import annotations

import enum
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import PolariguideError, RealizationError, ValidationError
from .green import GreenModel, Variant
from .oracles import near_field_shift
from .solver import dispersion_map, response_spectrum
from .spectrum import Classification, classify_modes, collective_spectrum, spectrum_arrays
from .system import ChainSpec, derive_seed, generate_chain

log = logging.getLogger(__name__)


def participation_bins(N: int) -> np.ndarray:
    """Unit-width bins centred on the integers 1..N."""
    return np.arange(0.5, N + 1.5, 1.0)


class Observable(str, enum.Enum):
    TRANSMISSION = "transmission"
    ABSORPTION = "absorption"
    SPECTRUM = "spectrum"
    PARTICIPATION = "participation"
    LOCALIZATION = "localization"


@dataclass(frozen=True, eq=False)
class EnsembleSpec:
    base: ChainSpec
    realizations: int = 1
    master_seed: int = 0
    observables: frozenset = frozenset(Observable)
    deltas: np.ndarray = field(default_factory=lambda: np.linspace(-10, 10, 401))
    qs: np.ndarray | None = None
    variant: Variant = Variant.FAR_FIELD
    on_error: str = "abort"

    def __post_init__(self):
        if int(self.realizations) < 1:
            raise ValidationError("realizations must be >= 1")
        if self.on_error not in ("abort", "skip"):
            raise ValidationError("on_error must be 'abort' or 'skip'")
        object.__setattr__(self, "observables", frozenset(Observable(o) for o in self.observables))
        object.__setattr__(self, "variant", Variant(self.variant))
        d = np.asarray(self.deltas, dtype=float)
        if d.size == 0 or not np.all(np.isfinite(d)):
            raise ValidationError("delta grid must be nonempty and finite")
        object.__setattr__(self, "deltas", d)
        if self.qs is not None:
            q = np.asarray(self.qs, dtype=float)
            if q.size == 0 or not np.all(np.isfinite(q)):
                raise ValidationError("q grid must be nonempty and finite")
            object.__setattr__(self, "qs", q)

    @property
    def model(self) -> GreenModel:
        return GreenModel.from_spec(self.base, self.variant)


@dataclass(eq=False)
class EnsembleStats:
    """Aggregated ensemble output.

    ``mean`` and ``var`` map observable names (``T``, ``R``, ``loss``,
    ``absorption``, ``dispersion``) to per-grid-point statistics (population
    variance). ``cloud`` has one row per mode: realization index, shift,
    linewidth, participation, classification code (0 extended, 1 localized,
    2 pair; -1 when not computed), localization length and fit R^2 (nan when
    not computed).
    """

    deltas: np.ndarray
    qs: np.ndarray | None
    mean: dict
    var: dict
    cloud: np.ndarray
    histogram_edges: np.ndarray
    histogram_counts: np.ndarray
    seeds: list
    failures: list

    @property
    def localized_fraction(self) -> float:
        cls = self.cloud[:, 4]
        if len(cls) == 0 or np.all(cls < 0):
            return float("nan")
        return float(np.mean(cls == 1))


_CLASS_CODE = {Classification.EXTENDED: 0, Classification.LOCALIZED: 1, Classification.PAIR: 2}


def run_realization(spec: EnsembleSpec, index: int) -> dict:
    """All requested observables for realization ``index``."""
    seed = derive_seed(spec.master_seed, index)
    chain = generate_chain(spec.base, seed)
    model = spec.model
    obs = spec.observables
    out = {"seed": seed}
    if Observable.TRANSMISSION in obs or Observable.ABSORPTION in obs:
        resp = response_spectrum(chain, model, spec.deltas)
        if Observable.TRANSMISSION in obs:
            out["T"], out["R"], out["loss"] = resp["T"], resp["R"], resp["loss"]
        if Observable.ABSORPTION in obs:
            out["absorption"] = resp["absorption"]
            if spec.qs is not None:
                out["dispersion"] = dispersion_map(chain, model, spec.qs, spec.deltas)
    if obs & {Observable.SPECTRUM, Observable.PARTICIPATION, Observable.LOCALIZATION}:
        modes = collective_spectrum(chain, model)
        shift, gamma, p = spectrum_arrays(modes)
        codes = np.full(len(modes), -1.0)
        xi = np.full(len(modes), np.nan)
        r2 = np.full(len(modes), np.nan)
        if Observable.LOCALIZATION in obs:
            fits = classify_modes(modes, chain)
            codes = np.array([_CLASS_CODE[f.classification] for f in fits], float)
            xi = np.array([f.xi for f in fits])
            r2 = np.array([f.r_squared for f in fits])
        out["cloud"] = np.column_stack([np.full(len(modes), float(index)), shift, gamma, p, codes, xi, r2])
    return out


def run_ensemble(spec: EnsembleSpec, threads: int = 1) -> EnsembleStats:
    M = int(spec.realizations)

    def task(i):
        try:
            return run_realization(spec, i)
        except PolariguideError as exc:
            return RealizationError(i, derive_seed(spec.master_seed, i), exc)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(task, range(M)))
    else:
        results = [task(i) for i in range(M)]

    failures, good = [], []
    for i, res in enumerate(results):
        if isinstance(res, RealizationError):
            if spec.on_error == "abort":
                raise res
            log.warning("skipping %s", res)
            failures.append((res.index, res.seed, str(res.cause)))
        else:
            good.append(res)
    if not good:
        raise ValidationError("every realization failed")

    mean, var = {}, {}
    for key in ("T", "R", "loss", "absorption", "dispersion"):
        if key in good[0]:
            stack = np.stack([r[key] for r in good])
            mean[key] = stack.mean(axis=0) if len(good) > 1 else stack[0].copy()
            var[key] = stack.var(axis=0) if len(good) > 1 else np.zeros_like(stack[0])
    if "cloud" in good[0]:
        cloud = np.vstack([r["cloud"] for r in good])
    else:
        cloud = np.empty((0, 7))
    edges = participation_bins(spec.base.N)
    counts = np.histogram(cloud[:, 3], bins=edges)[0] if len(cloud) else np.zeros(len(edges) - 1, int)
    seeds = [derive_seed(spec.master_seed, i) for i in range(M)]
    return EnsembleStats(spec.deltas, spec.qs, mean, var, cloud, edges, counts, seeds, failures)


def density_sweep(base: ChainSpec, Ns, deltas, variant=Variant.FAR_FIELD, hold: str = "Z", seed: int = 0):
    """Response spectra for several emitter numbers.

    ``hold="Z"`` keeps the filled length N L of ``base`` fixed (density sweep);
    ``hold="L"`` keeps the spacing. Returns one dict per N with the keys of
    :func:`response_spectrum` plus ``N``, ``L`` and ``near_field_shift``.
    """
    if hold not in ("Z", "L"):
        raise ValidationError("hold must be 'Z' or 'L'")
    rows = []
    for N in Ns:
        L = base.length / N if hold == "Z" else base.L
        spec = replace(base, N=int(N), L=L, l=base.l * L / base.L)
        chain = generate_chain(spec, seed)
        model = GreenModel.from_spec(spec, variant)
        res = response_spectrum(chain, model, deltas)
        res.update(N=int(N), L=L, near_field_shift=near_field_shift(L, model))
        rows.append(res)
    return rows
