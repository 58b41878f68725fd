"""Acceptance gate: every structural criterion at its stated tolerance.

One full default-scale harness run (6 x 6 matrices, rank-2 base, 200
samples per property) backs most criteria; determinism and the negative
control run separately on a smaller configuration.  Each criterion
prints its own pass/fail line.
"""
import pytest

from opgroupoid.harness import SuiteConfig, report_to_json, run_suites, strip_timestamp


@pytest.fixture(scope="module")
def report():
    return run_suites(SuiteConfig())


def _props(report):
    return {
        (s["suite"], p["name"]): p for s in report["suites"] for p in s["properties"]
    }


def _check(report, label, requirements):
    """requirements: list of (suite, property, tolerance)."""
    props = _props(report)
    failures = []
    for suite, name, tol in requirements:
        rec = props[(suite, name)]
        if rec["error"] or rec["max_residual"] > tol:
            failures.append(f"{suite}/{name}: max {rec['max_residual']:.3e} > {tol:.1e} {rec['error']}")
    status = "PASS" if not failures else "FAIL"
    print(f"ACCEPTANCE {label}: {status}")
    for f in failures:
        print("   ", f)
    assert not failures


def test_criterion_1_polar_and_inverse(report):
    _check(
        report,
        "1 polar/inverse",
        [
            ("wstar", "polar_reconstruction", 1e-8),
            ("wstar", "inverse_relations", 1e-8),
            ("wstar", "inverse_uniqueness", 0.0),
        ],
    )


def test_criterion_2_atlas(report):
    _check(
        report,
        "2 atlas",
        [
            ("lattice", "chart_round_trip", 1e-8),
            ("groupoid", "chart_round_trip", 1e-8),
            ("bundle", "frame_chart_reconstruction", 1e-8),
            ("lattice", "transition_vs_recompute", 1e-7),
            ("groupoid", "chart_transition", 1e-7),
            ("lattice", "transition_cocycle", 1e-6),
        ],
    )


def test_criterion_3_gauge_isomorphisms(report):
    _check(
        report,
        "3 gauge isomorphisms",
        [
            ("bundle", "gauge_unit", 1e-8),
            ("bundle", "gauge_composition", 1e-8),
            ("bundle", "gauge_inverse_supports", 1e-8),
            ("bundle", "gauge_representative_independence", 1e-8),
            ("bundle", "unitary_gauge_agreement", 1e-8),
        ],
    )


def test_criterion_4_bracket_coherence(report):
    _check(
        report,
        "4 bracket coherence",
        [
            ("algebroid", "flat_vs_chart_bracket", 1e-6),
            ("algebroid", "flat_vs_section_bracket", 1e-6),
            ("algebroid", "section_chart_agreement", 1e-6),
            ("algebroid", "antisymmetry", 1e-10),
            ("algebroid", "jacobi", 1e-5),
            ("algebroid", "leibniz", 1e-6),
            ("algebroid", "anchor_homomorphism", 1e-4),
            ("algebroid", "anchor_flow", 1e-4),
            ("algebroid", "holomorphic_closure", 1e-4),
            ("algebroid", "flat_vs_chart_bracket_fd", 1e-4),
            ("algebroid", "wirtinger_fd_agreement", 1e-4),
        ],
    )


def test_criterion_5_unitary_closure(report):
    props = _props(report)
    assert props[("unitary", "bracket_tangency_closure")]["samples"] >= 100
    _check(
        report,
        "5 unitary closure",
        [
            ("unitary", "bracket_tangency_closure", 1e-6),
            ("unitary", "chart_bracket_closure", 1e-6),
        ],
    )


def test_criterion_6_exact_sequence(report):
    _check(
        report,
        "6 exact sequence",
        [
            ("atiyah", "rank_counts", 0.0),
            ("atiyah", "containment", 1e-8),
        ],
    )


def test_criterion_7_derivations(report):
    _check(
        report,
        "7 derivations",
        [
            ("derivations", "operator_commutator", 1e-5),
            ("derivations", "lift_commutation", 1e-5),
            ("derivations", "quotient_invariance", 1e-8),
            ("derivations", "quotient_homomorphism", 1e-8),
            ("derivations", "mod_characterization", 0.0),
        ],
    )


def test_criterion_8_column_vector_cross_check(report):
    props = _props(report)
    assert props[("grassmann", "bracket_agreement")]["samples"] >= 100
    _check(
        report,
        "8 column-vector cross check",
        [
            ("grassmann", "gram_polar_agreement", 1e-12),
            ("grassmann", "supports_agreement", 1e-12),
            ("grassmann", "multiindex_agreement", 1e-12),
            ("grassmann", "bracket_agreement", 1e-12),
            ("grassmann", "anchor_agreement", 1e-12),
        ],
    )


def test_criterion_9_determinism_and_negative_control():
    cfg = SuiteConfig(samples=10, suites=("wstar", "lattice", "atiyah"))
    r1 = run_suites(cfg)
    r2 = run_suites(cfg)
    same = report_to_json(strip_timestamp(r1)) == report_to_json(strip_timestamp(r2))
    bad = run_suites(SuiteConfig(samples=4, suites=("wstar",), tol_eq=1e-300))
    from opgroupoid.cli import main

    exit_code = main(["--suite", "wstar", "--samples", "4", "--tol-eq", "1e-300"])
    ok = same and not bad["passed"] and exit_code == 1
    print(f"ACCEPTANCE 9 determinism/negative control: {'PASS' if ok else 'FAIL'}")
    assert same, "reports differ beyond the timestamp"
    assert not bad["passed"], "absurd tolerance did not fail"
    assert exit_code == 1, "nonzero exit expected for the negative control"


def test_all_default_properties_pass(report):
    props = _props(report)
    failures = [
        f"{k[0]}/{k[1]}" for k, p in props.items() if not p["passed"]
    ]
    print(f"ACCEPTANCE full-suite: {'PASS' if not failures else 'FAIL'} ({len(props)} properties)")
    assert not failures, failures
