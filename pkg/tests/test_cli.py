import json
from pathlib import Path

import pytest

from padic_k1.cli import main, parse_unit, tokenize
from padic_k1.coeff import UnramifiedRing
from padic_k1.exceptions import ExpressionParseError
from padic_k1.groupring import GroupRingElement
from padic_k1.groups import Group


def test_tokens_carry_positions() -> None:
    tokens = tokenize("w(1, 2) * g^-1")
    assert [t.text for t in tokens] == ["w", "(", "1", ",", "2", ")", "*", "g", "^", "-", "1", ""]
    assert [t.position for t in tokens[:3]] == [0, 1, 2]
    assert tokens[-1].kind == "end"


def test_parse_unit(z3: UnramifiedRing, c2: Group) -> None:
    g = GroupRingElement.basis(z3, c2, next(iter(c2.generators.values())))
    expected = GroupRingElement.one(z3, c2) + 3 * g
    assert parse_unit("1 + 3*g", z3, c2) == expected
    assert parse_unit("1+3*a", z3, c2) == expected
    assert parse_unit("(1 + 3*g)^-1", z3, c2) == expected.inverse()
    assert parse_unit("w(2) * g", z3, c2) == -g


@pytest.mark.parametrize(
    ("text", "position"),
    [("1 + * g", 4), ("(1 + 3*g", 8), ("1 + 3*h", 6), ("(3*g)^-1", 6), ("1 + g", 0)],
)
def test_parse_errors_point_at_the_problem(z3: UnramifiedRing, c2: Group, text: str, position: int) -> None:
    with pytest.raises(ExpressionParseError) as info:
        parse_unit(text, z3, c2)
    assert info.value.position == position


def test_group_info(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["group-info", "Q8", "--p", "2", "--format", "json"]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["order"] == 8
    assert info["classes"] == 5
    assert info["center_order"] == 2
    assert info["abelianization"] == "Z/2 x Z/2"
    assert info["p_regular_classes"] == ["1"]


def test_sk1(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["sk1", "C2xC2", "2", "--format", "json"]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["h2"] == "Z/2"
    assert info["sk1"] == "1"


def test_sk1_rejects_other_groups(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["sk1", "S3", "3"]) == 2
    assert "k-conjugacy" in capsys.readouterr().err


def test_gamma(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["gamma", "C3", "3", "1", "3", "4", "--format", "json"]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["values"]["1"] == [5]
    assert sorted(info["values"].values()) == [[0], [0], [5]]
    assert info["known_precision"] == 2
    assert info["assertion_precision"] == 1


def test_gamma_with_bad_expression(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["gamma", "C3", "3", "1", "3", "1 +"]) == 2
    assert "position 3" in capsys.readouterr().err


def test_verify_writes_report(tmp_path: Path) -> None:
    out = tmp_path / "report.json"
    argv = ["verify", "--claim", "sk1-case", "--group", "C3xC3", "--nS", "3", "--format", "json", "--out", str(out)]
    assert main(argv) == 0
    bundle = json.loads(out.read_text())
    (report,) = bundle["reports"]
    assert report["claim"] == "sk1-case"
    assert report["status"] == "pass"
    assert report["scenario"]["nS"] == 3
    assert "runtime_ms" not in report


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--group", "C1"],
        ["verify", "--all"],
        ["verify", "--claim", "sk1-case", "--group", "C1", "--p", "4"],
        ["verify", "--claim", "sk1-case", "--group", "C1", "--nR", "2", "--nS", "3"],
        ["verify", "--claim", "nonsense", "--group", "C1"],
        ["gamma", "Z5", "5", "1", "3", "1"],
        ["no-such-command"],
    ],
)
def test_usage_errors(argv: list[str]) -> None:
    assert main(argv) == 2


def test_verify_gamma_sequence_climbs_the_tower(capsys: pytest.CaptureFixture[str]) -> None:
    argv = ["verify", "--claim", "gamma-seq", "--group", "C3", "--p", "3", "--nR", "1", "--N", "4", "--format", "json"]
    assert main(argv) == 0
    (report,) = json.loads(capsys.readouterr().out)["reports"]
    assert report["status"] == "pass"
    assert report["precision_used"] == 2
