"""
Consolidated verification suite.

Each criterion function checks one documented guarantee of the toolchain at
a pinned tolerance and returns a CriterionResult with deterministic detail
lines; `verify_all` runs them all (plus a determinism check that re-runs
the suite and compares rendered bytes) and renders one PASS/FAIL line per
criterion.  Two criteria are expected to FAIL and say why in their details:

* criterion 2 pins the renumbered pump layout to run lengths
  (2M-1, M**2-4M-3).  That layout is not reachable by any node
  renumbering: the support graphs of the constructed lattice and of the
  pinned layout differ in their closed-6-walk counts, an isomorphism
  invariant.  The constructed layout uses run lengths (M-1, M**2-2M-3).
* criterion 5 pins the nullifier decay to exp(-2r)/2.  The evolution
  transform cosh(2r) 1 + sinh(2r) A - which criterion 4 independently
  validates against an ODE oracle - forces the uniform value exp(-4r);
  at r = 0 the variance of p_i - (A q)_i is 1, not 1/2, for any
  unit-row-norm target, so no convention reaches exp(-2r)/2.

The failures are reported honestly rather than patched over by loosening
the checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gaussian, hankel, lattice


@dataclass
class CriterionResult:
    index: int
    name: str
    passed: bool
    details: list


def _fmt(x: float) -> str:
    return f"{x:.12g}"


# ============================================================
# Criterion implementations
# ============================================================

def criterion_exact_orthogonality(M: int = 6) -> CriterionResult:
    """A @ A = 1 in exact integer arithmetic for two lattice sizes."""
    details = []
    ok = True
    for m in (M, M + 2):
        A = lattice.expand(lattice.build_torus_supergraph(m))
        rep = lattice.check_orthogonal(A)
        ok &= rep.is_orthogonal
        details.append(f"M={m} orthogonal={str(rep.is_orthogonal).lower()} "
                       f"worst_deviation={rep.worst_deviation}")
    return CriterionResult(1, "exact-orthogonality", ok, details)


def claimed_run_lengths(M: int):
    """Pinned reference run lengths (long runs) for the 2x2 layout."""
    return 2 * M - 1, M * M - 4 * M - 3


def constructed_run_lengths(M: int):
    """Run lengths actually produced by the tensor-factor renumbering."""
    return M - 1, M * M - 2 * M - 3


def positions_from_run_lengths(M: int, s: int, t: int):
    """The 15 nonzero skew-diagonal positions of the standard skeleton.

    Skeleton per half: 0^s B 0^t B 0^s B 0 B 0^s B 0^t B 0^s B 0, corner
    block, then the same half again; valid whenever 4s + 2t = 2M**2 - 10.
    """
    runs = (s, t, s, 1, s, t, s)
    first = []
    pos = -1
    for run in runs:
        pos += run + 1
        first.append(pos)
    corner = pos + 2
    if corner != 2 * M * M - 1:
        raise ValueError(f"run lengths ({s}, {t}) do not fit M={M}")
    return first + [corner] + [2 * M * M + p for p in first]


def outer_support(B_quarters: np.ndarray) -> np.ndarray:
    """0/1 occupancy of the 2x2 blocks of a physical matrix."""
    nb = B_quarters.shape[0] // 2
    blocks = B_quarters.reshape(nb, 2, nb, 2)
    return blocks.any(axis=(1, 3)).astype(np.int64)


def layout_outer_support(M: int, positions) -> np.ndarray:
    """0/1 occupancy of a 2x2 block-Hankel layout with the given diagonals."""
    nb = 2 * M * M
    S = np.zeros((nb, nb), dtype=np.int64)
    for d in positions:
        for i in range(max(0, d - nb + 1), min(nb - 1, d) + 1):
            S[i, d - i] = 1
    return S


def walk_refutation(Sa: np.ndarray, Sb: np.ndarray, k_max: int):
    """First k with trace(Sa^k) != trace(Sb^k), or None up to k_max.

    Closed-walk counts are isomorphism invariants, so a differing pair
    proves the two support graphs cannot be related by any renumbering.
    Exact int64 arithmetic; k_max is clipped so the counts cannot overflow
    (degree <= 8 bounds the k-walk count by 8**k * n).
    """
    n = Sa.shape[0]
    safe_k = int((63 - np.log2(n)) // 3)
    k_max = min(k_max, safe_k)
    Pa = np.eye(n, dtype=np.int64)
    Pb = np.eye(n, dtype=np.int64)
    for k in range(1, k_max + 1):
        Pa = Pa @ Sa
        Pb = Pb @ Sb
        ta, tb = int(np.trace(Pa)), int(np.trace(Pb))
        if ta != tb:
            return k, ta, tb
    return None


def criterion_block_hankel_structure(M: int = 6) -> CriterionResult:
    """Renumbered lattice: 2x2 block-Hankel, 15 pi blocks, pinned positions."""
    details = []
    A = lattice.expand(lattice.build_torus_supergraph(M))
    result = lattice.renumber_to_block_hankel(A, M)
    short = hankel.shorthand_of(result.renumbered, block_side=2)
    nonzero = short.nonzero_indices()
    roundtrip = np.array_equal(result.restore().quarters, A.quarters)
    all_pi = True
    for d in nonzero:
        b = short.entries[d]
        pi_like = (b[0, 0] == b[1, 1] and b[0, 1] == b[1, 0]
                   and abs(b[0, 0]) == abs(b[0, 1]) != 0)
        all_pi &= bool(pi_like)
    s_ref, t_ref = claimed_run_lengths(M)
    ref_positions = positions_from_run_lengths(M, s_ref, t_ref)
    positions_match = nonzero == ref_positions
    details.append(f"block_hankel=true nonzero_blocks={len(nonzero)} "
                   f"all_pi_proportional={str(all_pi).lower()} "
                   f"roundtrip_exact={str(roundtrip).lower()}")
    details.append(f"claimed_positions(s={s_ref},t={t_ref})={ref_positions}")
    details.append(f"achieved_positions(s={constructed_run_lengths(M)[0]},"
                   f"t={constructed_run_lengths(M)[1]})={nonzero}")
    if not positions_match:
        # Both supports are full-block 2x2 layouts, so comparing their
        # block-occupancy graphs is equivalent to comparing the physical
        # supports; closed-walk counts are renumbering invariants.
        cert = walk_refutation(outer_support(result.renumbered.quarters),
                               layout_outer_support(M, ref_positions),
                               k_max=2 * M)
        if cert is not None:
            k, ta, tb = cert
            details.append(
                f"claimed positions are unreachable by any renumbering: "
                f"closed-{k}-walk counts differ ({ta} vs {tb}), and walk "
                f"counts are invariant under node renumbering")
        else:
            details.append(
                "no closed-walk certificate separates the layouts at this "
                "size; positions still do not match")
    ok = (len(nonzero) == 15 and all_pi and roundtrip and positions_match)
    return CriterionResult(2, "pinned-pump-layout", ok, details)


def criterion_pump_constancy(M: int = 6) -> CriterionResult:
    """15 pump lines for every size; edge count 32 M**2 (linear in N)."""
    details = []
    ok = True
    rows = hankel.scaling_report([M, M + 2, M + 4])
    for r in rows:
        good = (r.pump_lines == 15 and r.physical_edges == 32 * r.M * r.M)
        ok &= good
        details.append(f"M={r.M} pump_lines={r.pump_lines} "
                       f"physical_edges={r.physical_edges} "
                       f"expected_edges={32 * r.M * r.M} "
                       f"bandwidth_span={r.bandwidth_span}")
    return CriterionResult(3, "pump-constancy", ok, details)


# ---- ODE oracle for the evolution (independent of evolve's matrix path) ----

def _rk4_propagator(F: np.ndarray, t: float, steps: int) -> np.ndarray:
    """Fixed-step RK4 for dS/dt = F S, S(0) = 1."""
    S = np.eye(F.shape[0])
    h = t / steps
    for _ in range(steps):
        k1 = F @ S
        k2 = F @ (S + 0.5 * h * k1)
        k3 = F @ (S + 0.5 * h * k2)
        k4 = F @ (S + h * k3)
        S = S + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return S


def ode_oracle_covariance(A: np.ndarray, r: float, tol: float = 1e-12):
    """Vacuum covariance after integrating the quadrature equations of motion.

    Integrates dq/dt = 2A q, dp/dt = -2A p with RK4, halving the step until
    two successive propagators agree to tol (relative to the matrix scale),
    then returns S (1/2) S^T.
    """
    n = A.shape[0]
    Z = np.zeros((n, n))
    F = np.block([[2.0 * A, Z], [Z, -2.0 * A]])
    steps = 64
    prev = _rk4_propagator(F, r, steps)
    for _ in range(16):
        steps *= 2
        cur = _rk4_propagator(F, r, steps)
        scale = max(1.0, float(np.abs(cur).max()))
        if np.abs(cur - prev).max() <= tol * scale:
            return 0.5 * cur @ cur.T, steps
        prev = cur
    raise RuntimeError("ODE oracle did not converge")


def criterion_evolution_oracle(seed: int = 20240915) -> CriterionResult:
    """Closed-form evolution vs RK4 oracle, 1e-10, on 20 random cases + two-mode."""
    rng = np.random.default_rng(seed)
    details = []
    worst = 0.0
    for case in range(20):
        n = int(rng.integers(2, 7))
        A = rng.uniform(-1.0, 1.0, size=(n, n))
        A = 0.5 * (A + A.T)
        np.fill_diagonal(A, 0.0)
        radius = max(abs(np.linalg.eigvalsh(A)).max(), 1e-3)
        A *= 0.5 / radius          # keep exp(4rA) in comfortable range
        r = float(rng.uniform(0.1, 2.0))
        state = gaussian.evolve(gaussian.EvolutionParams(A, r))
        V_ode, _ = ode_oracle_covariance(A, r)
        worst = max(worst, float(np.abs(state.cov - V_ode).max()))
    X = np.array([[0.0, 1.0], [1.0, 0.0]])
    for r in (0.5, 1.0, 2.0):
        state = gaussian.evolve(gaussian.EvolutionParams(X, r))
        V_ode, _ = ode_oracle_covariance(X, r)
        worst = max(worst, float(np.abs(state.cov - V_ode).max()))
    ok = worst <= 1e-10
    details.append(f"cases=23 worst_abs_difference={_fmt(worst)} tol=1e-10")
    return CriterionResult(4, "evolution-oracle", ok, details)


def _convention_cases(M: int):
    X = np.array([[0.0, 1.0], [1.0, 0.0]])
    ring = lattice.expand(lattice.build_ring_supergraph(4))
    lat = lattice.expand(lattice.build_torus_supergraph(M))
    return [("two-mode", X), ("ring-4", ring.dense()), (f"lattice-M{M}", lat.dense())]


def criterion_nullifier_decay(M: int = 6) -> CriterionResult:
    """Pinned decay exp(-2r)/2 within 1e-6 at r in {0.5, 1, 2}; monotone in r."""
    details = []
    value_ok = True
    monotone_ok = True
    for name, A in _convention_cases(M):
        colors = lattice.bicoloring(lattice.PhysAdjacency(
            np.asarray(A * 4, dtype=np.int64)))
        maxima = []
        for r in (0.5, 1.0, 2.0):
            state = gaussian.evolve(gaussian.EvolutionParams(A, r))
            conv = gaussian.best_phase_convention(state, colors, A)
            rotated = gaussian.rotate_color_class(state, colors,
                                                  conv.quarter_turns)
            rep = gaussian.nullifier_variances(rotated, conv.signed_target,
                                               squeeze_r=r)
            claimed = np.exp(-2.0 * r) / 2.0
            err = float(np.abs(rep.variances - claimed).max())
            spread = float(np.ptp(rep.variances))
            value_ok &= err <= 1e-6
            maxima.append(rep.max_variance)
            details.append(
                f"case={name} r={_fmt(r)} max_variance={_fmt(rep.max_variance)} "
                f"claimed={_fmt(claimed)} deviation={_fmt(err)} "
                f"uniform_spread={_fmt(spread)} "
                f"convention=({conv.quarter_turns:+d},{conv.target_sign:+d}A)")
        monotone_ok &= maxima[0] > maxima[1] > maxima[2]
    if not value_ok:
        details.append(
            "pinned value exp(-2r)/2 is inconsistent with the validated "
            "transform cosh(2r)1 + sinh(2r)A: the engine's uniform decay is "
            "exp(-4r) (and equals 1, not 1/2, at r=0)")
    details.append(f"monotone_decrease={str(monotone_ok).lower()}")
    return CriterionResult(5, "nullifier-decay", value_ok and monotone_ok,
                           details)


def _crown_pipeline(r: float):
    ring = lattice.build_ring_supergraph(4)
    A = lattice.expand(ring)
    colors = lattice.bicoloring(A)
    dense = A.dense()
    state = gaussian.evolve(gaussian.EvolutionParams(dense, r))
    conv = gaussian.best_phase_convention(state, colors, dense)
    rotated = gaussian.rotate_color_class(state, colors, conv.quarter_turns)
    top = [2 * k for k in range(4)]       # layer-0 node of each macronode
    bottom = [2 * k + 1 for k in range(4)]
    reduced = gaussian.measure_q(rotated, top)
    target = gaussian.ideal_graph_delete(conv.signed_target, top)
    rep = gaussian.nullifier_variances(reduced, target, squeeze_r=r)
    return reduced, target, rep, bottom


def criterion_crown_to_ring() -> CriterionResult:
    """Measuring the crown's top layer leaves the bottom ring, better with r."""
    details = []
    residuals = []
    for r in (1.0, 2.0, 3.0):
        _, target, rep, _ = _crown_pipeline(r)
        residuals.append(rep.max_variance)
        details.append(f"r={_fmt(r)} max_residual={_fmt(rep.max_variance)}")
    _, target, _, _ = _crown_pipeline(1.0)
    weights = np.abs(target[target != 0])
    uniform_half = bool(weights.size) and bool(np.all(weights == 0.5))
    stats = gaussian.support_graph_stats(target)
    ring_shape = (stats.n_nodes == 4 and stats.n_edges == 4
                  and stats.max_degree == 2 and stats.is_connected)
    decreasing = residuals[0] > residuals[1] > residuals[2]
    details.append(f"ideal_ring_uniform_half={str(uniform_half).lower()} "
                   f"ring_cycle={str(ring_shape).lower()} "
                   f"decreasing={str(decreasing).lower()}")
    ok = uniform_half and ring_shape and decreasing
    return CriterionResult(6, "crown-to-ring", ok, details)


def _lattice_layer_pipeline(M: int, r: float, keep_layer: int = 0):
    A = lattice.expand(lattice.build_torus_supergraph(M))
    colors = lattice.bicoloring(A)
    dense = A.dense()
    state = gaussian.evolve(gaussian.EvolutionParams(dense, r))
    conv = gaussian.best_phase_convention(state, colors, dense)
    rotated = gaussian.rotate_color_class(state, colors, conv.quarter_turns)
    measured = [i for i in range(A.n) if i % 4 != keep_layer]
    reduced = gaussian.measure_q(rotated, measured)
    target = gaussian.ideal_graph_delete(conv.signed_target, measured)
    rep = gaussian.nullifier_variances(reduced, target, squeeze_r=r)
    return reduced, target, rep


def criterion_layer_reduction(M: int = 6) -> CriterionResult:
    """Measuring three of four layers leaves the uniform-|1/4| lattice."""
    details = []
    residuals, eg_errors = [], []
    target = None
    for r in (1.0, 2.0):
        reduced, target, rep = _lattice_layer_pipeline(M, r)
        eg = gaussian.effective_graph(reduced)
        eg_err = float(np.abs(eg.V - target).max())
        residuals.append(rep.max_variance)
        eg_errors.append(eg_err)
        details.append(f"r={_fmt(r)} max_residual={_fmt(rep.max_variance)} "
                       f"effective_graph_error={_fmt(eg_err)}")
    weights = np.abs(target[target != 0])
    uniform_quarter = bool(np.all(weights == 0.25))
    stats = gaussian.support_graph_stats(target)
    regular4 = stats.n_nodes == M * M and stats.max_degree == 4 and \
        stats.degree_histogram == {4: M * M}
    decreasing = residuals[0] > residuals[1] and eg_errors[0] > eg_errors[1]
    details.append(f"ideal_uniform_quarter={str(uniform_quarter).lower()} "
                   f"four_regular={str(regular4).lower()} "
                   f"decreasing={str(decreasing).lower()}")
    ok = uniform_quarter and regular4 and decreasing
    return CriterionResult(7, "layer-reduction", ok, details)


def criterion_torus_cut(M: int = 6) -> CriterionResult:
    """Meridian cut: connected remaining patch, degree <= 4, residual improves."""
    details = []
    A = lattice.expand(lattice.build_torus_supergraph(M))
    colors = lattice.bicoloring(A)
    dense = A.dense()
    meridians = (0, 0)
    # ideal path
    state1 = gaussian.evolve(gaussian.EvolutionParams(dense, 1.0))
    conv = gaussian.best_phase_convention(state1, colors, dense)
    _, ideal_report = gaussian.reduce_and_cut(conv.signed_target, M, 0,
                                              meridians)
    st = ideal_report.graph_stats
    details.append(
        f"ideal nodes={st.n_nodes} expected_patch="
        f"{ideal_report.expected_patch_macronodes} edges={st.n_edges} "
        f"connected={str(st.is_connected).lower()} max_degree={st.max_degree} "
        f"cycle_rank={st.cycle_rank} "
        f"degree_histogram={sorted(st.degree_histogram.items())}")
    residuals = []
    for r in (1.0, 2.0):
        state = gaussian.evolve(gaussian.EvolutionParams(dense, r))
        rotated = gaussian.rotate_color_class(state, colors,
                                              conv.quarter_turns)
        _, rep = gaussian.reduce_and_cut(rotated, M, 0, meridians,
                                         target=conv.signed_target,
                                         squeeze_r=r)
        residuals.append(rep.max_residual)
        details.append(f"gaussian r={_fmt(r)} max_residual={_fmt(rep.max_residual)}")
    ok = (st.is_connected and st.max_degree <= 4
          and residuals[1] < residuals[0])
    details.append(f"residual_improves={str(residuals[1] < residuals[0]).lower()}")
    return CriterionResult(8, "torus-cut", ok, details)


# ============================================================
# Suite driver
# ============================================================

def run_criteria(M: int = 6) -> list:
    if M % 2 or M < 6:
        raise lattice.LatticeError(f"verify suite needs even M >= 6, got {M}")
    return [
        criterion_exact_orthogonality(M),
        criterion_block_hankel_structure(M),
        criterion_pump_constancy(M),
        criterion_evolution_oracle(),
        criterion_nullifier_decay(M),
        criterion_crown_to_ring(),
        criterion_layer_reduction(M),
        criterion_torus_cut(M),
    ]


def render_report(results) -> str:
    lines = []
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        lines.append(f"CRITERION {res.index} {res.name}: {status}")
        for d in res.details:
            lines.append(f"  {d}")
    return "\n".join(lines) + "\n"


def verify_all(M: int = 6):
    """Run the full suite twice; criterion 9 is byte-identical re-run output.

    Returns (results, report_text, all_passed).
    """
    first = run_criteria(M)
    text_first = render_report(first)
    second = run_criteria(M)
    deterministic = render_report(second) == text_first
    det = CriterionResult(9, "deterministic-reports", deterministic,
                          [f"rerun_bytes_identical={str(deterministic).lower()}"])
    results = first + [det]
    report = render_report(results)
    return results, report, all(r.passed for r in results)
