from phononflux import run_all_checks


def test_all_built_in_checks_pass():
    results = run_all_checks()
    assert {r.criterion for r in results} == {1, 2, 5, 6}
    for r in results:
        assert r.passed, f"criterion {r.criterion}.{r.index}: {r.label}"
        assert r.passed == (r.measured <= r.bound)
        assert r.label
