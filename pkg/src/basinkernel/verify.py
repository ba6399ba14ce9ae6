"""Executable checks of the identities behind the construction.

Every check returns a ``CheckReport`` whose ``passed`` flag is exactly
``max_residual <= tolerance``.  ``run_all`` drives the whole suite over a
list of family members and never stops at the first failure.
"""

from __future__ import annotations

import csv
import io
import json
import math
import traceback
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import cuntz
from .dynamics import (
    FamilyMember,
    IterConfig,
    Status,
    basin_member_limit,
    limit_verdicts,
    preimages,
    series_verdicts,
)
from .kernel import (
    KernelConfig,
    NotConverged,
    check_functional_eq,
    eval_kernel,
    gram_matrix,
    omega_verdicts,
)
from .poly import eval_exact, specialize
from .render import GridSpec, map_rows, row_points

DEFAULT_CORNERS = (
    FamilyMember(0, 1),
    FamilyMember(0, 0.5),
    FamilyMember(0, 1 + 0.3j),
    FamilyMember(1, 1),
    FamilyMember(2, 1),
)

DEFAULT_TOLERANCES = {
    "basin_equivalence": 0.0,
    "complete_invariance": 0.0,
    "continuity": 1e-12,
    "continuity_geometric": 0.0,
    "cuntz_sums": 1e-9,
    "duplicate_law": 0.0,
    "factorization": 0.0,
    "formula_s0s1_s1s1": 0.0,
    "functional_eq": 1e-9,
    "good_form": 0.0,
    "good_form_closure": 0.0,
    "gram_psd": 1e-9,
    "hermitian": 1e-12,
    "kernel_diagonal": 1e-12,
    "kernel_expansion": 1e-6,
    "preimage_branch_symmetry": 1e-9,
    "preimage_roundtrip": 1e-8,
    "specialization_commutes": 1e-10,
}


@dataclass
class CheckReport:
    check_name: str
    params: dict
    samples: int
    max_residual: float
    tolerance: float
    passed: bool = field(init=False)
    residuals: list = field(default_factory=list)
    skipped: bool = False

    def __post_init__(self):
        self.passed = bool(self.max_residual <= self.tolerance)


@dataclass(frozen=True)
class SuiteOptions:
    cuntz_samples: int = 200
    functional_pairs: int = 500
    hermitian_pairs: int = 500
    gram_sets: int = 50
    gram_size: int = 6
    preimage_samples: int = 200
    invariance_samples: int = 200
    expansion_point: complex = 0.1
    expansion_max_len: int = 4
    basin_grid: GridSpec = GridSpec(0j, 2.0, 256, 256)
    basis_max_len: int = 4
    specialization_samples: int = 20
    specialization_max_len: int = 3
    iter_cfg: IterConfig = IterConfig()
    kernel_cfg: KernelConfig = KernelConfig()


def _fm_params(fm: FamilyMember, **extra) -> dict:
    return {"n": fm.n, "a_re": fm.a.real, "a_im": fm.a.imag, **extra}


# -- sampling ------------------------------------------------------------------


def sample_basin(fm: FamilyMember, rng: np.random.Generator, count: int,
                 cfg: IterConfig | None = None, half_width: float = 2.0) -> list[complex]:
    """Rejection-sample points of the basin of 0 from a square about 0.

    Only points whose orbit reaches the convergence disk within a quarter
    of the iteration budget are kept, so that one extra preimage step or a
    kernel product of ``max_factors`` terms still resolves them.
    """
    cfg = cfg or IterConfig()
    out: list[complex] = []
    while len(out) < count:
        batch = rng.uniform(-half_width, half_width, size=(4 * count, 2))
        pts = batch[:, 0] + 1j * batch[:, 1]
        status, iters = limit_verdicts(fm, pts, cfg)
        ok = (status == Status.MEMBER) & (iters <= cfg.max_iters // 4)
        out.extend(complex(p) for p in pts[ok])
    return out[:count]


# -- individual checks -------------------------------------------------------------


def check_cuntz_sums(fm: FamilyMember, w, tol: float = DEFAULT_TOLERANCES["cuntz_sums"]) -> CheckReport:
    """Normalized preimage sums of 1, zeta^(2^(n+1)) and zeta^(2^n).

    For each w the sums must equal (1, 1, 0); the residual is the largest
    deviation over all three sums and all w.
    """
    ws = [complex(x) for x in np.atleast_1d(np.asarray(w, dtype=complex))]
    big, small = 2 ** (fm.n + 1), 2**fm.n
    residuals = []
    for wv in ws:
        zetas = preimages(fm, wv)
        m = len(zetas)
        s_one = sum(1 for _ in zetas) / m
        s_big = sum(z**big for z in zetas) / m
        s_small = sum(z**small for z in zetas) / m
        residuals.append(max(abs(s_one - 1), abs(s_big - 1), abs(s_small)))
    return CheckReport("cuntz_sums", _fm_params(fm, m=2 ** (fm.n + 2)), len(ws),
                       max(residuals, default=0.0), tol, residuals)


def basis_values(fm: FamilyMember, words: Sequence, z: complex) -> list[complex]:
    out = []
    for v in words:
        out.append(eval_exact(cuntz.basis_vector(fm, v).poly, fm.a, z))
    return out


def check_kernel_expansion(fm: FamilyMember, z: complex, w: complex, max_len: int,
                           cfg: KernelConfig | None = None,
                           tol: float = DEFAULT_TOLERANCES["kernel_expansion"],
                           small_radius: float = 0.15) -> CheckReport:
    """Partial sums of sum_v b_v(z) conj(b_v(w)) against the product kernel.

    ``residuals[L-1]`` is the relative error after all canonical words of
    length <= L.  Points outside ``small_radius`` are skipped.
    """
    z, w = complex(z), complex(w)
    params = _fm_params(fm, z_re=z.real, z_im=z.imag, w_re=w.real, w_im=w.imag, max_len=max_len)
    if abs(z) > small_radius or abs(w) > small_radius:
        params["skip_reason"] = f"|z| or |w| exceeds {small_radius}"
        return CheckReport("kernel_expansion", params, 0, 0.0, tol, [], skipped=True)
    kv = eval_kernel(fm, z, w, cfg)
    if not kv.converged:
        raise NotConverged(f"kernel did not converge at z={z}, w={w}")
    words = cuntz.enumerate_canonical(max_len)
    bz = basis_values(fm, words, z)
    bw = basis_values(fm, words, w)
    partial = 0j
    shells = [0.0] * (max_len + 1)
    residuals = []
    by_len: dict[int, complex] = {}
    for v, x, y in zip(words, bz, bw):
        term = x * y.conjugate()
        by_len[len(v)] = by_len.get(len(v), 0j) + term
        shells[len(v)] += abs(term)
    for length in range(max_len + 1):
        partial += by_len.get(length, 0j)
        if length:
            residuals.append(abs(partial - kv.value) / abs(kv.value))
    last, before = shells[max_len], shells[max_len - 1] if max_len > 1 else shells[0]
    ratio = last / before if before else 0.0
    params["tail_estimate"] = last * ratio / (1 - ratio) if ratio < 1 else math.inf
    params["kernel_re"], params["kernel_im"] = kv.value.real, kv.value.imag
    return CheckReport("kernel_expansion", params, len(words), residuals[-1] if residuals else 0.0,
                       tol, residuals)


def basin_verdict_arrays(fm: FamilyMember, grid: GridSpec, cfg: IterConfig | None = None,
                         threads: int | None = None):
    """Limit, series and Omega-series statuses over the grid (flattened,
    row-major), computed in parallel row blocks."""
    cfg = cfg or IterConfig()
    kcfg = KernelConfig(max_factors=cfg.max_iters, tail_eps=KernelConfig().tail_eps,
                        escape_radius=cfg.escape_radius)

    def work(r0, r1):
        pts = np.concatenate([row_points(grid, r) for r in range(r0, r1)])
        return (limit_verdicts(fm, pts, cfg)[0], series_verdicts(fm, pts, cfg)[0],
                omega_verdicts(fm, pts, kcfg)[0])

    parts = map_rows(work, grid.height_px, threads)
    return tuple(np.concatenate([p[k] for p in parts]) for k in range(3))


def check_basin_equivalence(fm: FamilyMember, grid: GridSpec, cfg: IterConfig | None = None,
                            tol: float = DEFAULT_TOLERANCES["basin_equivalence"],
                            threads: int | None = None) -> CheckReport:
    """Disagreement fraction between the three membership tests.

    Pixels where any test is Indeterminate are excluded.
    """
    lim, ser, omg = basin_verdict_arrays(fm, grid, cfg, threads)
    ind = Status.INDETERMINATE
    decided = (lim != ind) & (ser != ind) & (omg != ind)
    n_dec = int(decided.sum())
    disagree = decided & ((lim != ser) | (lim != omg))
    frac = float(disagree.sum()) / n_dec if n_dec else 0.0
    params = _fm_params(
        fm,
        center_re=grid.center.real, center_im=grid.center.imag, half_width=grid.half_width,
        width_px=grid.width_px, height_px=grid.height_px,
        members=int((decided & (lim == Status.MEMBER)).sum()),
        indeterminate=int((~decided).sum()),
    )
    return CheckReport("basin_equivalence", params, n_dec, frac, tol)


def check_functional_eq_batch(fm: FamilyMember, pairs, cfg: KernelConfig | None = None,
                              tol: float = DEFAULT_TOLERANCES["functional_eq"]) -> CheckReport:
    residuals = [check_functional_eq(fm, z, w, cfg) for z, w in pairs]
    return CheckReport("functional_eq", _fm_params(fm), len(residuals),
                       max(residuals, default=0.0), tol, residuals)


def check_hermitian(fm: FamilyMember, pairs, cfg: KernelConfig | None = None,
                    tol: float = DEFAULT_TOLERANCES["hermitian"]) -> CheckReport:
    residuals = []
    for z, w in pairs:
        kzw = eval_kernel(fm, z, w, cfg).value
        kwz = eval_kernel(fm, w, z, cfg).value
        residuals.append(abs(kzw - kwz.conjugate()) / abs(kzw))
    return CheckReport("hermitian", _fm_params(fm), len(residuals), max(residuals, default=0.0), tol)


def check_kernel_diagonal(fm: FamilyMember, points, cfg: KernelConfig | None = None,
                          tol: float = DEFAULT_TOLERANCES["kernel_diagonal"]) -> CheckReport:
    """K(z,z) is real and at least 1; residual is the worse of the
    relative imaginary part and the shortfall below 1."""
    residuals = []
    for z in points:
        k = eval_kernel(fm, z, z, cfg).value
        residuals.append(max(abs(k.imag) / abs(k), max(0.0, 1.0 - k.real)))
    return CheckReport("kernel_diagonal", _fm_params(fm), len(residuals), max(residuals, default=0.0), tol)


def check_gram_psd(fm: FamilyMember, point_sets, cfg: KernelConfig | None = None,
                   tol: float = DEFAULT_TOLERANCES["gram_psd"]) -> CheckReport:
    """Residual is max(0, -smallest eigenvalue) over all Gram matrices."""
    mins = []
    for pts in point_sets:
        g = gram_matrix(fm, pts, cfg)
        g = 0.5 * (g + g.conj().T)
        mins.append(float(np.linalg.eigvalsh(g)[0]))
    residual = max((max(0.0, -m) for m in mins), default=0.0)
    return CheckReport("gram_psd", _fm_params(fm, min_eigenvalue=min(mins, default=0.0)),
                       len(mins), residual, tol, mins)


def check_preimage_roundtrip(fm: FamilyMember, ws, tol: float = DEFAULT_TOLERANCES["preimage_roundtrip"]) -> CheckReport:
    residuals = []
    for w in ws:
        w = complex(w)
        zs = preimages(fm, w)
        if len(zs) != fm.degree:
            residuals.append(math.inf)
            continue
        residuals.append(max(abs(fm(z) - w) for z in zs) / (1 + abs(w)))
    return CheckReport("preimage_roundtrip", _fm_params(fm), len(residuals), max(residuals, default=0.0), tol)


def _multiset_distance(xs: Sequence[complex], ys: Sequence[complex]) -> float:
    if len(xs) != len(ys):
        return math.inf
    pool = list(ys)
    worst = 0.0
    for x in xs:
        j = min(range(len(pool)), key=lambda k: abs(pool[k] - x))
        worst = max(worst, abs(pool.pop(j) - x))
    return worst


def check_preimage_branch_symmetry(fm: FamilyMember, ws,
                                   tol: float = DEFAULT_TOLERANCES["preimage_branch_symmetry"]) -> CheckReport:
    residuals = [
        _multiset_distance(preimages(fm, w), preimages(fm, w, negate_branch=True)) for w in ws
    ]
    return CheckReport("preimage_branch_symmetry", _fm_params(fm), len(residuals),
                       max(residuals, default=0.0), tol)


def check_complete_invariance(fm: FamilyMember, ws, cfg: IterConfig | None = None,
                              tol: float = DEFAULT_TOLERANCES["complete_invariance"]) -> CheckReport:
    """Fraction of preimages of Member points that are not Member."""
    total = bad = 0
    for w in ws:
        for z in preimages(fm, w):
            total += 1
            if basin_member_limit(fm, z, cfg).status != Status.MEMBER:
                bad += 1
    return CheckReport("complete_invariance", _fm_params(fm), total, bad / total if total else 0.0, tol)


def check_continuity(fm: FamilyMember, steps: int = 10,
                     tol: float = DEFAULT_TOLERANCES["continuity"]) -> CheckReport:
    """For v = 01 along a_k = a (1 + 1/k) the distance is 3^alpha |a_k^alpha - a^alpha|,
    which is 3|a|/k when n = 0."""
    a = fm.a
    path = [a * (1 + 1 / k) for k in range(1, steps + 1)]
    dists = cuntz.continuity_modulus(fm, "01", path, a)
    alpha = fm.alpha
    residuals = [abs(d - 3**alpha * abs(ak**alpha - a**alpha)) / max(1.0, d) for ak, d in zip(path, dists)]
    return CheckReport("continuity", _fm_params(fm, word="01", steps=steps), steps,
                       max(residuals, default=0.0), tol, dists)


def check_continuity_geometric(fm: FamilyMember, rng: np.random.Generator, samples: int = 20,
                               max_len: int = 4, steps: int = 10, ratio: float = 0.5,
                               tol: float = DEFAULT_TOLERANCES["continuity_geometric"]) -> CheckReport:
    """Along a_k = a + (a/2) ratio^k the distances never increase.

    Words whose vector does not depend on a give a constant distance of 0.
    Residual is the number of steps, over all sampled words, where the
    distance goes up.
    """
    a = fm.a
    path = [a + 0.5 * a * ratio**k for k in range(1, steps + 1)]
    bad = 0
    words = []
    for _ in range(samples):
        length = int(rng.integers(1, max_len + 1))
        v = cuntz.Word(tuple(int(c) for c in rng.integers(0, 2, size=length)))
        words.append(str(v))
        d = cuntz.continuity_modulus(fm, v, path, a)
        bad += sum(1 for x, y in zip(d, d[1:]) if not y <= x)
    return CheckReport("continuity_geometric", _fm_params(fm, words=words, ratio=ratio),
                       samples, float(bad), tol)


# -- symbolic checks (depend on n only) -----------------------------------------------


def check_formula(n: int, tol: float = DEFAULT_TOLERANCES["formula_s0s1_s1s1"]) -> CheckReport:
    bad = int(cuntz.basis_vector(n, "01").poly != cuntz.closed_form_s0s1(n))
    bad += int(cuntz.basis_vector(n, "11").poly != cuntz.closed_form_s1s1(n))
    return CheckReport("formula_s0s1_s1s1", {"n": n}, 2, float(bad), tol)


def check_good_form(n: int, max_len: int, tol: float = DEFAULT_TOLERANCES["good_form"]) -> CheckReport:
    """Every canonical word except the empty word and '1' has good form;
    those two must not."""
    failures = []
    words = cuntz.enumerate_canonical(max_len)
    for v in words:
        expected = str(v) not in ("", "1")
        if cuntz.good_form(cuntz.basis_vector(n, v)) != expected:
            failures.append(str(v))
    return CheckReport("good_form", {"n": n, "max_len": max_len, "failures": failures},
                       len(words), float(len(failures)), tol)


def check_good_form_closure(n: int, max_len: int,
                            tol: float = DEFAULT_TOLERANCES["good_form_closure"]) -> CheckReport:
    """S0 f and S1 f keep good form for every good-form b_v with |v| <= max_len."""
    failures = []
    count = 0
    for v in cuntz.enumerate_canonical(max_len):
        f = cuntz.basis_vector(n, v).poly
        if not cuntz.good_form(f):
            continue
        count += 1
        for letter in (0, 1):
            if not cuntz.good_form(cuntz.apply_letter(n, letter, f)):
                failures.append(f"{letter}{v}")
    return CheckReport("good_form_closure", {"n": n, "max_len": max_len, "failures": failures},
                       count, float(len(failures)), tol)


def check_factorization(n: int, max_len: int, tol: float = DEFAULT_TOLERANCES["factorization"]) -> CheckReport:
    """S1 f == z^(2^n) S0 f, with S1 built as an independent composition."""
    from .dynamics import family_poly
    from .poly import BiPolyZ, poly_compose, poly_mul

    words = cuntz.enumerate_canonical(max_len)
    bad = 0
    zpow = BiPolyZ.monomial(2**n)
    r = family_poly(n)
    for v in words:
        f = cuntz.basis_vector(n, v).poly
        s1 = poly_mul(zpow, poly_compose(f, r))
        bad += int(s1 != cuntz.apply_s0(n, f).shift(2**n))
    return CheckReport("factorization", {"n": n, "max_len": max_len}, len(words), float(bad), tol)


def check_duplicate_law(n: int, max_len: int, tol: float = DEFAULT_TOLERANCES["duplicate_law"]) -> CheckReport:
    """b_(v0) == b_v for every word v with |v| <= max_len.

    b_(v0) is built letter by letter from scratch, so the memo of b_v is
    not consulted.
    """
    bad = 0
    count = 0
    for length in range(max_len + 1):
        for letters in np.ndindex(*([2] * length)):
            v = cuntz.Word(tuple(int(c) for c in letters))
            f = cuntz.apply_s0(n, cuntz.BiPolyZ.one())
            for letter in reversed(v.letters):
                f = cuntz.apply_letter(n, letter, f)
            bad += int(f != cuntz.basis_vector(n, v).poly)
            count += 1
    return CheckReport("duplicate_law", {"n": n, "max_len": max_len}, count, float(bad), tol)


def check_specialization_commutes(fm: FamilyMember, rng: np.random.Generator, samples: int, max_len: int,
                                  tol: float = DEFAULT_TOLERANCES["specialization_commutes"]) -> CheckReport:
    """Exact b_v specialized at a versus the S-word run in floating point.

    Residual per word: max coefficient difference over max coefficient
    magnitude.
    """
    residuals = []
    words = []
    for _ in range(samples):
        length = int(rng.integers(1, max_len + 1))
        v = cuntz.Word(tuple(int(c) for c in rng.integers(0, 2, size=length)))
        words.append(str(v))
        exact = specialize(cuntz.basis_vector(fm, v).poly, fm.a)
        numeric = cuntz.numeric_basis_vector(fm, v)
        keys = set(exact.terms) | set(numeric.terms)
        scale = max((abs(c) for c in exact.terms.values()), default=1.0)
        diff = max((abs(exact.terms.get(k, 0j) - numeric.terms.get(k, 0j)) for k in keys), default=0.0)
        residuals.append(diff / scale)
    return CheckReport("specialization_commutes", _fm_params(fm, words=words), samples,
                       max(residuals, default=0.0), tol, residuals)


# -- suite -------------------------------------------------------------------------


def _rng(seed: int, *tags: int) -> np.random.Generator:
    return np.random.default_rng([seed, *tags])


def _pairs(points: list[complex]) -> list[tuple[complex, complex]]:
    half = len(points) // 2
    return list(zip(points[:half], points[half:2 * half]))


def run_all(fm_list: Iterable[FamilyMember] = DEFAULT_CORNERS, seed: int = 0,
            tolerances: dict | float | None = None,
            options: SuiteOptions | None = None) -> list[CheckReport]:
    """Run every check over the given family members.

    ``tolerances`` maps check names to tolerances; a bare number overrides
    them all.  Results are deterministic for a given seed.
    """
    opts = options or SuiteOptions()
    if isinstance(tolerances, (int, float)):
        tol = {k: float(tolerances) for k in DEFAULT_TOLERANCES}
    else:
        tol = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    fm_list = list(fm_list)
    reports: list[CheckReport] = []

    def guarded(name: str, params: dict, fn: Callable[[], CheckReport]) -> None:
        try:
            reports.append(fn())
        except Exception as exc:  # aggregate, never abort the suite
            p = dict(params, error=f"{type(exc).__name__}: {exc}")
            p["traceback"] = traceback.format_exc(limit=3).splitlines()[-1]
            reports.append(CheckReport(name, p, 0, math.inf, tol[name]))

    for idx, fm in enumerate(fm_list):
        base = _fm_params(fm)
        icfg, kcfg = opts.iter_cfg, opts.kernel_cfg
        basin = sample_basin(fm, _rng(seed, idx, 0), max(opts.cuntz_samples, opts.invariance_samples), icfg)
        pair_pts = sample_basin(fm, _rng(seed, idx, 1), 2 * opts.functional_pairs, icfg)
        herm_pts = sample_basin(fm, _rng(seed, idx, 2), 2 * opts.hermitian_pairs, icfg)
        gram_pts = sample_basin(fm, _rng(seed, idx, 3), opts.gram_sets * opts.gram_size, icfg)
        g = opts.gram_size
        gram_sets = [gram_pts[i * g:(i + 1) * g] for i in range(opts.gram_sets)]
        wr = _rng(seed, idx, 4).uniform(-2, 2, size=(opts.preimage_samples, 2))
        free_ws = [complex(x, y) for x, y in wr]
        zc = complex(opts.expansion_point)

        guarded("cuntz_sums", base, lambda: check_cuntz_sums(fm, basin[:opts.cuntz_samples], tol["cuntz_sums"]))
        guarded("functional_eq", base,
                lambda: check_functional_eq_batch(fm, _pairs(pair_pts), kcfg, tol["functional_eq"]))
        guarded("hermitian", base, lambda: check_hermitian(fm, _pairs(herm_pts), kcfg, tol["hermitian"]))
        guarded("kernel_diagonal", base, lambda: check_kernel_diagonal(fm, herm_pts, kcfg, tol["kernel_diagonal"]))
        guarded("gram_psd", base, lambda: check_gram_psd(fm, gram_sets, kcfg, tol["gram_psd"]))
        guarded("kernel_expansion", base,
                lambda: check_kernel_expansion(fm, zc, zc, opts.expansion_max_len, kcfg, tol["kernel_expansion"]))
        guarded("basin_equivalence", base,
                lambda: check_basin_equivalence(fm, opts.basin_grid, icfg, tol["basin_equivalence"]))
        guarded("preimage_roundtrip", base,
                lambda: check_preimage_roundtrip(fm, free_ws, tol["preimage_roundtrip"]))
        guarded("preimage_branch_symmetry", base,
                lambda: check_preimage_branch_symmetry(fm, free_ws, tol["preimage_branch_symmetry"]))
        guarded("complete_invariance", base,
                lambda: check_complete_invariance(fm, basin[:opts.invariance_samples], icfg,
                                                  tol["complete_invariance"]))
        guarded("continuity", base, lambda: check_continuity(fm, tol=tol["continuity"]))
        guarded("continuity_geometric", base,
                lambda: check_continuity_geometric(fm, _rng(seed, idx, 6), max_len=4 if fm.n == 0 else 2,
                                                   tol=tol["continuity_geometric"]))
        guarded("specialization_commutes", base,
                lambda: check_specialization_commutes(fm, _rng(seed, idx, 5), opts.specialization_samples,
                                                      opts.specialization_max_len,
                                                      tol["specialization_commutes"]))

    for n in sorted({fm.n for fm in fm_list}):
        L = opts.basis_max_len
        p = {"n": n}
        guarded("formula_s0s1_s1s1", p, lambda: check_formula(n, tol["formula_s0s1_s1s1"]))
        guarded("good_form", p, lambda: check_good_form(n, L, tol["good_form"]))
        guarded("good_form_closure", p, lambda: check_good_form_closure(n, L - 1, tol["good_form_closure"]))
        guarded("factorization", p, lambda: check_factorization(n, L - 1, tol["factorization"]))
        guarded("duplicate_law", p, lambda: check_duplicate_law(n, L - 1, tol["duplicate_law"]))

    # stable sort keeps the per-corner order inside each check name
    reports.sort(key=lambda r: r.check_name)
    return reports


# -- report serialization ---------------------------------------------------------------


CSV_FIELDS = ("check_name", "n", "a_re", "a_im", "samples", "max_residual", "tolerance", "passed", "skipped")


def reports_to_csv(reports: Sequence[CheckReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in reports:
        writer.writerow([
            r.check_name, r.params.get("n", ""), repr(r.params.get("a_re", "")), repr(r.params.get("a_im", "")),
            r.samples, repr(r.max_residual), repr(r.tolerance), r.passed, r.skipped,
        ])
    return buf.getvalue()


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def reports_to_json(reports: Sequence[CheckReport]) -> str:
    return json.dumps([_jsonable(asdict(r)) for r in reports], indent=1, sort_keys=True) + "\n"


def all_passed(reports: Sequence[CheckReport]) -> bool:
    return all(r.passed for r in reports)
