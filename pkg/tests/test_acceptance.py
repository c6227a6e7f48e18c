"""Acceptance suite: one test per numbered criterion, each printing a
PASS/FAIL line with the measured values.

Run with `pytest tests/test_acceptance.py -v -s` to see every line.
The synthetic experiment (criteria 3-6, 9) is built once per session and
shared; its weight-learning runs use lambda=1.0, gamma=0.01, the stable
configuration for this benchmark family (see README notes on tuning).
"""

import time

import numpy as np
import pytest

from jwprop import (
    EdgeWeights,
    Graph,
    JwpConfig,
    LabelSet,
    Method,
    RegularizerKind,
    SynthSpec,
    auc,
    bench,
    build_sybil_benchmark,
    grad_directed,
    grad_undirected,
    inject_noise,
    lbp_step_directed,
    lbp_step_undirected,
    loglog_slope,
    run,
    weight_class_means,
)
from jwprop.graph import BIDIRECTIONAL

from _oracles import (
    brute_force_auc_counts,
    dense_directed_step,
    dense_undirected_step,
    finite_difference_gradient,
    objective,
    random_directed_graph,
    random_labels,
    random_undirected_graph,
    random_weights,
)

SEEDS = (0, 1, 2, 3, 4)
EXPERIMENT_LAMBDA = 1.0
EXPERIMENT_GAMMA = 0.01


def report(num, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}")
    assert ok, f"criterion {num}: {detail}"


@pytest.fixture(scope="module")
def experiment():
    """Replicated-PA benchmark over 5 seeds with every method variant."""
    out = {"aucs": {}, "runs": {}, "w0": None, "core_seconds": 0.0}

    def record(key, seed, result, test):
        out["aucs"].setdefault(key, []).append(auc(result.posteriors, test).auc)
        out["runs"].setdefault(key, []).append(result)

    for seed in SEEDS:
        tic = time.monotonic()
        spec = SynthSpec(node_count=4000, attachment=10, seed=seed,
                         attack_edges=10_000, train_pos=100, train_neg=100)
        g, truth, train = build_sybil_benchmark(spec)
        test = truth.exclude(train)

        def go(method, reg, labels=train):
            cfg = JwpConfig(method=method, regularizer=reg,
                            lam=EXPERIMENT_LAMBDA, gamma=EXPERIMENT_GAMMA)
            return run(g, labels, cfg, truth=truth)

        record("lbp", seed, go(Method.LBP_U, RegularizerKind.CONSISTENCY), test)
        record("consistency", seed,
               go(Method.LBP_JWP_U, RegularizerKind.CONSISTENCY), test)
        out["core_seconds"] += time.monotonic() - tic

        record("none", seed, go(Method.LBP_JWP_U, RegularizerKind.NONE), test)
        record("l1", seed, go(Method.LBP_JWP_U, RegularizerKind.L1), test)
        record("l2", seed, go(Method.LBP_JWP_U, RegularizerKind.L2), test)
        noisy = inject_noise(train, 20.0, seed + 100)
        record("noise20", seed,
               go(Method.LBP_JWP_U, RegularizerKind.CONSISTENCY, noisy), test)

        out["w0"] = out["runs"]["consistency"][-1].w0
        out["runs"].setdefault("graph_truth", []).append((g, truth, train))
    return out


def test_criterion_1_gradient_correctness():
    start = time.monotonic()
    rng = np.random.default_rng(2024)
    regs = list(RegularizerKind)
    worst = 0.0
    checked = 0
    for i in range(50):
        directed = i % 2 == 1
        reg = regs[i % 4]
        n = int(rng.integers(20, 31))
        g = (random_directed_graph(rng, n, density=0.15) if directed
             else random_undirected_graph(rng, n, density=0.15))
        w = random_weights(rng, g, min_abs=0.05)
        q = rng.uniform(-1, 1, n)
        p_t = rng.uniform(-1, 1, n)
        labels = random_labels(rng, n, 3, 3)
        lam = float(rng.uniform(0.1, 1.0))
        if directed:
            grad = grad_directed(g, w, q, p_t, labels, lam, reg)
            keep = ~((g.pair_class != BIDIRECTIONAL)
                     & (np.abs(p_t[g.slot_ends[:, 1]]) <= 1e-3))
        else:
            grad = grad_undirected(g, w, q, p_t, labels, lam, reg)
            keep = np.ones(g.slot_count, dtype=bool)
        fd = finite_difference_gradient(
            objective(g, q, p_t, labels, lam, reg, directed), w.values, h=1e-5)
        err = np.abs(grad - fd)
        tol = 1e-5 * np.maximum(np.abs(grad), np.abs(fd)) + 1e-9
        rel = err[keep] / np.maximum(np.maximum(np.abs(grad), np.abs(fd)), 1e-9)[keep]
        worst = max(worst, float(rel.max(initial=0.0)))
        checked += int(keep.sum())
        assert np.all(err[keep] <= tol[keep]), f"graph {i} ({reg.value}) mismatch"
    elapsed = time.monotonic() - start
    report(1, elapsed < 60.0,
           f"50 graphs, {checked} slots, worst relative error {worst:.3g}, "
           f"{elapsed:.1f}s (< 60s)")


def test_criterion_2_propagation_oracle():
    rng = np.random.default_rng(7)
    worst = 0.0
    for i in range(100):
        n = int(rng.integers(2, 51))
        directed = i % 2 == 1
        if directed:
            g = random_directed_graph(rng, n)
            w = random_weights(rng, g)
            q = rng.uniform(-1, 1, n)
            p = rng.uniform(-1, 1, n)
            got = lbp_step_directed(g, w, q, p)
            want = dense_directed_step(g, w, q, p)
        else:
            g = random_undirected_graph(rng, n)
            w = random_weights(rng, g)
            q = rng.uniform(-1, 1, n)
            p = rng.uniform(-1, 1, n)
            got = lbp_step_undirected(g, w, q, p)
            want = dense_undirected_step(g, w, q, p)
        worst = max(worst, float(np.max(np.abs(got - want))))
    assert worst < 1e-12

    # fully bidirectional directed graphs match the undirected step exactly
    exact = True
    for _ in range(10):
        n = int(rng.integers(2, 40))
        gu = random_undirected_graph(rng, n)
        w = random_weights(rng, gu)
        gd = Graph.from_edges(np.concatenate([gu.edges, gu.edges[:, ::-1]]),
                              directed=True, node_count=n)
        vals = np.empty(gd.slot_count)
        for s, (u, v) in enumerate(gu.slot_ends):
            vals[gd.edge_slot(int(u), int(v))] = w.values[s]
            vals[gd.edge_slot(int(v), int(u))] = w.values[s]
        q = rng.uniform(-1, 1, n)
        p = rng.uniform(-1, 1, n)
        exact &= bool(np.array_equal(
            lbp_step_undirected(gu, w, q, p),
            lbp_step_directed(gd, EdgeWeights(vals), q, p)))
    report(2, worst < 1e-12 and exact,
           f"100 graphs within {worst:.3g} of dense oracle (< 1e-12); "
           f"bidirectional == undirected exactly: {exact}")


def test_criterion_3_synthetic_sybil_auc(experiment):
    jwp = float(np.mean(experiment["aucs"]["consistency"]))
    lbp = float(np.mean(experiment["aucs"]["lbp"]))
    elapsed = experiment["core_seconds"]
    ok = jwp >= 0.95 and jwp > lbp and elapsed < 120.0
    report(3, ok,
           f"LBP-JWP-U mean AUC {jwp:.6f} (>= 0.95), plain LBP-U {lbp:.6f} "
           f"(strictly exceeded: {jwp > lbp}), core runtime {elapsed:.1f}s (< 120s)")


def test_criterion_4_weight_trend(experiment):
    w0 = experiment["w0"]
    ok = True
    details = []
    for (g, truth, _), result in zip(experiment["runs"]["graph_truth"],
                                     experiment["runs"]["consistency"]):
        homo, hetero = weight_class_means(g, result.weights, truth)
        ok &= hetero < w0 and hetero < homo
        details.append(f"{hetero:+.3f}/{homo:+.3f}")
    report(4, ok,
           f"hetero/homo mean weights per seed {details}, every hetero mean "
           f"below w0={w0:.4f} and below the homo mean: {ok}")


def test_criterion_5_regularizer_ordering(experiment):
    means = {k: float(np.mean(experiment["aucs"][k]))
             for k in ("consistency", "none", "l1", "l2")}
    ok = (means["consistency"] >= means["none"]
          and means["consistency"] >= max(means["l1"], means["l2"]) - 0.005)
    report(5, ok,
           "mean AUC consistency={consistency:.4f} none={none:.4f} "
           "l1={l1:.4f} l2={l2:.4f}".format(**means))


def test_criterion_6_label_noise_robustness(experiment):
    clean = float(np.mean(experiment["aucs"]["consistency"]))
    noisy = float(np.mean(experiment["aucs"]["noise20"]))
    diff = abs(clean - noisy)
    report(6, diff <= 0.05,
           f"AUC clean {clean:.4f} vs 20% label noise {noisy:.4f}, "
           f"|difference| {diff:.4f} (<= 0.05)")


def test_criterion_7_scalability():
    start = time.monotonic()
    grid = [10_000, 31_623, 100_000, 316_228, 1_000_000]
    records = bench(["lbp", "lbp-jwp"], grid, seeds=[0, 1, 2], alternations=10)
    elapsed = time.monotonic() - start
    by_method = {}
    for r in records:
        by_method.setdefault(r.method, []).append(r)
    slopes = {m: loglog_slope(rs) for m, rs in by_method.items()}
    lbp_ms = {r.edges: r.wall_ms_total for r in by_method["lbp"]}
    ratios = [r.wall_ms_total / lbp_ms[r.edges] for r in by_method["lbp-jwp"]]
    ok = (all(0.85 <= s <= 1.15 for s in slopes.values())
          and all(r <= 4.0 for r in ratios) and elapsed < 600.0)
    report(7, ok,
           f"log-log slopes {{lbp: {slopes['lbp']:.3f}, lbp-jwp: "
           f"{slopes['lbp-jwp']:.3f}}} in [0.85, 1.15]; jwp/lbp ratios "
           f"{[f'{r:.2f}' for r in ratios]} (<= 4); {elapsed:.0f}s (< 600s)")


def test_criterion_8_auc_oracle():
    rng = np.random.default_rng(11)
    exact = True
    for i in range(1000):
        k = int(rng.integers(2, 2001))
        n_pos = int(rng.integers(1, k))
        if i % 3 == 0:
            scores = rng.integers(0, 10, size=k) / 7.0  # heavy ties
        else:
            scores = rng.normal(size=k)
        ids = rng.permutation(k)
        truth = LabelSet.of(ids[:n_pos], ids[n_pos:])
        report_ = auc(scores, truth)
        greater, ties = brute_force_auc_counts(scores[truth.positive_array()],
                                               scores[truth.negative_array()])
        value = (greater + 0.5 * ties) / (n_pos * (k - n_pos))
        if report_.auc != value or report_.tie_pairs != ties:
            exact = False
            break
    report(8, exact, "sorted-rank AUC equals brute-force pairwise counting "
                     "exactly on 1000 random sets (size <= 2000)")


def test_criterion_9_convergence_bookkeeping(experiment):
    ok = True
    for key in ("lbp", "consistency", "none", "l1", "l2", "noise20"):
        for result in experiment["runs"][key]:
            ok &= result.alternations <= 15
            if result.converged:
                ok &= result.diagnostics[-1].conv_metric < 1e-3
            else:
                ok &= result.alternations == 15

    # bit-for-bit reproducibility of a full run
    g, truth, train = experiment["runs"]["graph_truth"][0]
    cfg = JwpConfig(method=Method.LBP_JWP_U, regularizer=RegularizerKind.CONSISTENCY,
                    lam=EXPERIMENT_LAMBDA, gamma=EXPERIMENT_GAMMA)
    rerun = run(g, train, cfg, truth=truth)
    first = experiment["runs"]["consistency"][0]
    bitwise = (rerun.posteriors.tobytes() == first.posteriors.tobytes()
               and rerun.weights.values.tobytes() == first.weights.values.tobytes())
    report(9, ok and bitwise,
           f"all runs halt within 15 alternations with correct converged flag: "
           f"{ok}; rerun bit-identical: {bitwise}")
