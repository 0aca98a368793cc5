import pytest

import agv


def test_tgc_model():
    m = agv.gen_tgc(2)
    assert m.agents == ["train1", "train2", "ctrl"]
    assert "A012" in m.assumptions
    assert m.states() == 16


def test_verify_reports():
    m = agv.load_model("tgc2")
    r = agv.verify(m, "<<train1,train2>>(G F s=1 & G F s=2)")
    assert r["result"] == "true"
    assert r["states"] == 16
    assert "witness" in r
    r = agv.verify(m, "<<train1>>G F x1=1")
    assert r["result"] == "false"


def test_guarantees():
    m = agv.gen_tgc(2)
    assert agv.guarantees(m, ["ctrl", "train2"], "A012")["result"] == "true"
    assert not agv.guarantees(m, ["ctrl", "train2"], "A1")["result"] == "true"


def test_agverify():
    m = agv.gen_tgc(2)
    ok = agv.agverify(m, [("train1", "G F s=2"), ("train2", "G F s=1")], ["A012", "A012"])
    assert ok["result"] == "derived"
    bad = agv.agverify(m, [("train1", "G F x1=1"), ("train2", "G F x2=1")], ["A1", "A1"])
    assert bad["result"] == "premise-failed"


def test_model_text_round_trip():
    m = agv.gen_robots(2, 2, 2)
    text = m.serialize()
    again = agv.parse_model(text)
    assert again.agents == m.agents
    assert again.serialize() == text


def test_errors_and_cli():
    with pytest.raises(agv.ModelError):
        agv.parse_model("domain 2\nbogus\n")
    with pytest.raises(ValueError):
        agv.verify(agv.gen_tgc(2), "G F (")
    code, out, _ = agv.run_cli(["verify", "--model", "tgc2", "--formula", "G F s=0"])
    assert code in (0, 1)
    assert agv.formula("G F s=1") == agv.formula("G (F s=1)")
