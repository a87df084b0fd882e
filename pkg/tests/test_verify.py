from dataclasses import replace

from wienerphase import cli
from wienerphase.fading import closed_form_moments
from wienerphase.verify import FAIL, VerifyConfig, run_verify

FAST = VerifyConfig(samples=20_000, chain_samples=2048, inner_steps=64)


def test_verify_passes():
    rep = run_verify(FAST)
    assert rep.ok, [c.line() for c in rep.failures]
    assert rep.exit_code == 0
    assert any(c.status == "finding" for c in rep.checks)


def test_injected_fault_is_caught():
    def wrong(alpha):
        m = closed_form_moments(alpha)
        return replace(m, m2=m.m2 - 0.01)

    rep = run_verify(FAST, moments_fn=wrong)
    assert rep.exit_code != 0
    failed = {c.check for c in rep.failures}
    assert "E[Z^2] closed form vs MC" in failed
    assert all(c.status == FAIL for c in rep.failures)


def test_check_line_format():
    rep = run_verify(FAST)
    line = rep.checks[0].line()
    assert "expected" in line and "got" in line and "tol" in line


def test_cli_verify_exit_code(monkeypatch, capsys):
    monkeypatch.setattr(cli, "VerifyConfig", lambda **kw: VerifyConfig(samples=20_000, chain_samples=2048, **kw))
    assert cli.main(["verify", "--inner-steps", "64"]) == 0
    out = capsys.readouterr()
    assert out.out.startswith("check,status,measured,expected,tolerance,detail")
    assert "0 failed" in out.err
