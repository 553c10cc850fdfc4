"""CLI surface: byte-exact goldens, canonical-JSON stability, exit codes,
sweep consistency with the single-cell subcommands, CSV export and the
parallel path."""

import csv
import json
import random
import shutil
import subprocess

import pytest

from k3fm.cli import SWEEP_FIELDS, SweepVerifyError, main


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


GOLDEN = [
    (
        ["lagr", "--d", "0", "--t", "5", "--json"],
        '{"d":0,"elements":8,"m":5,"omega_m":1,"subgroups":2,"t":5}\n',
    ),
    (["lagr", "--d", "0", "--t", "5"], "elements=8 subgroups=2\n"),
    (["ht", "--d", "6", "--t", "6", "--t-general"], "NonJacobianPartnersExist\n"),
    (
        ["ht", "--d", "6", "--t", "6", "--t-general", "--json"],
        '{"d":6,"ht_class":"NonJacobianPartnersExist","m":6,"omega_m":2,'
        '"t":6,"t_general":true}\n',
    ),
    (["jac", "--t", "6", "--k", "4"], "3\n"),
    (["jac", "--t", "6", "--k", "4", "--json"], '{"index":3,"k":4,"t":6}\n'),
    (
        ["disc", "--d", "3", "--t", "4", "--json"],
        '{"a":2,"b":8,"d":3,"orders":[2,8],"q":["3/2","13/8"],"t":4}\n',
    ),
    (["disc", "--d", "3", "--t", "4"], "a=2 b=8 orders=2,8 q=3/2,13/8\n"),
    (
        ["overlattice", "--d", "0", "--t", "5", "--gens", "1/5,0", "--json"],
        '{"d":0,"det":-1,"gram":[[0,1],[1,0]],"index":5,"t":5}\n',
    ),
    (
        ["overlattice", "--d", "0", "--t", "5", "--gens", "1/5,0"],
        "gram=0,1;1,0 det=-1 index=5\n",
    ),
    (
        ["caldararu", "--d", "2", "--t", "5", "--r", "0", "--x", "0",
         "--y", "1", "--s", "0", "--json"],
        '{"class":[20],"d":2,"divisibility":5,"q":"0","r":0,"s":0,"t":5,'
        '"x":0,"y":1}\n',
    ),
    (
        ["pair", "--d", "2", "--t", "5", "--json"],
        '{"d":2,"same_subgroup":true,"t":5,"vbar":[5],"vprime":[15]}\n',
    ),
    (["pair", "--d", "2", "--t", "5"], "vbar=5 vprime=15 same_subgroup=true\n"),
    (
        ["genus", "--d", "1", "--t", "5", "--json"],
        '{"d":1,"representatives":[1,4],"t":5}\n',
    ),
    (["fm", "--d", "1", "--t", "5", "--json"], '{"d":1,"fm":2,"g_order":2,"t":5}\n'),
    (
        ["de", "--d", "6", "--t", "6", "--json"],
        '{"b_order":2,"d":6,"de":4,"de_orbits":4,"g_order":2,"t":6,'
        '"t_general":true,"twist_classes":1}\n',
    ),
    (["de", "--d", "6", "--t", "6"], "de=4 de_orbits=4 twist_classes=1\n"),
    (
        ["de", "--d", "1", "--t", "5", "--g-gen", "24", "--g-order", "2", "--json"],
        '{"b_order":2,"d":1,"de":2,"de_orbits":1,"g_order":2,"t":5,'
        '"t_general":false,"twist_classes":2}\n',
    ),
    (
        ["de", "--d", "1", "--t", "13", "--b-order", "4", "--json"],
        '{"b_order":4,"d":1,"de":6,"de_orbits":1,"g_order":2,"t":13,'
        '"t_general":true,"twist_classes":3}\n',
    ),
    (
        ["de", "--d", "1", "--t", "7", "--b-order", "6", "--json"],
        '{"b_order":6,"d":1,"de":3,"de_orbits":1,"g_order":2,"t":7,'
        '"t_general":true,"twist_classes":1}\n',
    ),
    (
        ["involution", "--d", "6", "--t", "6", "--selector", "2:V,3:Vprime",
         "--json"],
        '{"d":6,"image_generator":[1,3],"image_selector":{"2":"Vprime","3":"V"},'
        '"source_generator":[1,4],"source_selector":{"2":"V","3":"Vprime"},'
        '"t":6}\n',
    ),
    (
        ["involution", "--d", "6", "--t", "6", "--selector", "2:V,3:Vprime"],
        "source=2:V,3:Vprime image=2:Vprime,3:V\n",
    ),
    (
        ["lagr", "--d", "0", "--t", "2", "--list", "--json"],
        '{"d":0,"elements":[[0,1],[1,0]],"m":2,"omega_m":1,"subgroups":'
        '[{"generator":[1,0],"selector":{"2":"V"}},{"generator":[0,1],'
        '"selector":{"2":"Vprime"}}],"t":2}\n',
    ),
]


@pytest.mark.parametrize("argv,expected", GOLDEN, ids=lambda v: " ".join(v) if isinstance(v, list) else None)
def test_golden_outputs(argv, expected, capsys):
    code, out, err = run_cli(argv, capsys)
    assert code == 0
    assert err == ""
    assert out == expected


def test_json_round_trip_stability(capsys):
    for argv, expected in GOLDEN:
        if "--json" not in argv:
            continue
        code, out, _ = run_cli(argv, capsys)
        assert code == 0
        redump = json.dumps(json.loads(out), sort_keys=True, separators=(",", ":"))
        assert redump + "\n" == out


def test_console_script_installed():
    exe = shutil.which("k3fm")
    assert exe is not None, "console script k3fm is not on PATH"
    proc = subprocess.run(
        [exe, "lagr", "--d", "0", "--t", "5", "--json"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == '{"d":0,"elements":8,"m":5,"omega_m":1,"subgroups":2,"t":5}\n'


# ----------------------------------------------------------------- errors


def test_exit_code_invalid_input(capsys):
    for argv in [
        ["disc", "--d", "1", "--t", "0"],
        ["jac", "--t", "6", "--k", "4", "--compose"],  # missing --l
        ["involution", "--d", "6", "--t", "6", "--selector", "5:V"],
        ["involution", "--d", "6", "--t", "6", "--selector", "2:W,3:V"],
        ["overlattice", "--d", "0", "--t", "5", "--gens", "nonsense"],
        ["caldararu", "--d", "2", "--t", "5", "--r", "1", "--x", "0",
         "--y", "0", "--s", "1"],  # square -2
        ["fm", "--d", "1", "--t", "5", "--g-order", "3"],  # odd order
        ["de", "--d", "1", "--t", "5", "--g-gen", "7"],  # 7 breaks q
        ["de", "--d", "1", "--t", "7", "--b-order", "4"],  # -1 not a square mod 7
        ["de", "--d", "1", "--t", "5", "--b-order", "6"],  # no order-6 units mod 5
        ["de", "--d", "1", "--t", "5", "--b-order", "3"],
        ["de", "--d", "1", "--t", "2", "--b-order", "4"],
        ["sweep", "--t-min", "0", "--t-max", "2"],
    ]:
        code, out, err = run_cli(argv, capsys)
        assert code == 2, argv
        assert out == ""
        assert err.startswith("k3fm: ")


def test_exit_code_capacity(capsys, monkeypatch):
    monkeypatch.setenv("K3FM_BUDGET", "10")
    code, out, err = run_cli(["lagr", "--d", "1", "--t", "5", "--list"], capsys)
    assert code == 3
    assert "budget" in err


def test_exit_code_verify_failure(capsys, monkeypatch):
    def boom(d, t, row):
        raise SweepVerifyError(f"cell d={d} t={t}: forced mismatch")

    monkeypatch.setattr("k3fm.cli._verify_cell", boom)
    code, out, err = run_cli(
        ["sweep", "--t-min", "3", "--t-max", "3", "--verify"], capsys
    )
    assert code == 1
    assert out == ""
    assert err.startswith("k3fm: verification failed:")


# ------------------------------------------------------------------ sweep


def test_sweep_table_shape(capsys):
    code, out, _ = run_cli(["sweep", "--t-min", "3", "--t-max", "5"], capsys)
    assert code == 0
    lines = out.strip("\n").split("\n")
    assert lines[0] == " ".join(SWEEP_FIELDS)
    assert len(lines) == 1 + 3 + 4 + 5  # full d range per t


def test_sweep_verify_passes(capsys):
    code, out, _ = run_cli(
        ["sweep", "--t-min", "3", "--t-max", "5", "--verify"], capsys
    )
    assert code == 0
    assert len(out.strip("\n").split("\n")) == 13


def test_sweep_formula_only_nulls(capsys):
    code, out, _ = run_cli(
        ["sweep", "--t-min", "1", "--t-max", "3", "--formula-only", "--json"],
        capsys,
    )
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 1 + 2 + 3
    for row in rows:
        assert row["fm"] is None
        if row["t"] <= 2:
            assert row["de"] is None and row["de_orbits"] is None
        else:
            assert row["de"] is not None and row["de_orbits"] is not None


def test_sweep_formula_matches_full_run(capsys):
    # closed forms agree with the enumerating run wherever both apply
    code, full, _ = run_cli(
        ["sweep", "--t-min", "3", "--t-max", "8", "--json"], capsys
    )
    assert code == 0
    code, fast, _ = run_cli(
        ["sweep", "--t-min", "3", "--t-max", "8", "--formula-only", "--json"],
        capsys,
    )
    assert code == 0
    for frow, qrow in zip(json.loads(full), json.loads(fast)):
        assert (frow["d"], frow["t"]) == (qrow["d"], qrow["t"])
        assert frow["de"] == qrow["de"]
        assert frow["de_orbits"] == qrow["de_orbits"]
        assert frow["ht_class"] == qrow["ht_class"]


def test_sweep_rows_sorted_lexicographically(capsys):
    _, out, _ = run_cli(["sweep", "--t-min", "3", "--t-max", "6", "--json"], capsys)
    rows = json.loads(out)
    keys = [(row["t"], row["d"]) for row in rows]
    assert keys == sorted(keys)


def test_sweep_d_window(capsys):
    _, out, _ = run_cli(
        ["sweep", "--t-min", "5", "--t-max", "6", "--d-min", "2", "--d-max", "3",
         "--json"],
        capsys,
    )
    rows = json.loads(out)
    assert [(row["d"], row["t"]) for row in rows] == [(2, 5), (3, 5), (2, 6), (3, 6)]


def test_sweep_empty_range(capsys):
    code, out, _ = run_cli(["sweep", "--t-min", "4", "--t-max", "3"], capsys)
    assert code == 0
    assert out == " ".join(SWEEP_FIELDS) + "\n"


def test_sweep_csv_export(tmp_path, capsys):
    target = tmp_path / "rows.csv"
    code, _, _ = run_cli(
        ["sweep", "--t-min", "1", "--t-max", "3", "--formula-only",
         "--out", str(target)],
        capsys,
    )
    assert code == 0
    with open(target, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == list(SWEEP_FIELDS)
    assert len(rows) == 7
    by_cell = {(row[0], row[1]): row for row in rows[1:]}
    assert by_cell[("0", "1")][SWEEP_FIELDS.index("fm")] == ""
    assert by_cell[("0", "1")][SWEEP_FIELDS.index("de")] == ""
    assert by_cell[("0", "3")][SWEEP_FIELDS.index("de")] == "2"  # m = 3, omega = 1


def test_sweep_parallel_matches_serial(capsys):
    argv = ["sweep", "--t-min", "3", "--t-max", "7", "--json"]
    code, serial, _ = run_cli(argv, capsys)
    assert code == 0
    code, parallel, _ = run_cli(argv + ["--jobs", "3"], capsys)
    assert code == 0
    assert parallel == serial


def test_sweep_cells_match_single_subcommands(capsys):
    rng = random.Random(20260814)
    cells = {(rng.randrange(0, t), t) for t in rng.choices(range(3, 13), k=6)}
    for d, t in sorted(cells, key=lambda c: (c[1], c[0])):
        _, out, _ = run_cli(
            ["sweep", "--t-min", str(t), "--t-max", str(t), "--d-min", str(d),
             "--d-max", str(d), "--json"],
            capsys,
        )
        row = json.loads(out)[0]
        _, out, _ = run_cli(["lagr", "--d", str(d), "--t", str(t), "--json"], capsys)
        lagr = json.loads(out)
        assert (row["lagr_elements"], row["lagr_subgroups"]) == (
            lagr["elements"],
            lagr["subgroups"],
        )
        assert (row["m"], row["omega_m"]) == (lagr["m"], lagr["omega_m"])
        _, out, _ = run_cli(
            ["ht", "--d", str(d), "--t", str(t), "--t-general", "--json"], capsys
        )
        assert row["ht_class"] == json.loads(out)["ht_class"]
        _, out, _ = run_cli(["de", "--d", str(d), "--t", str(t), "--json"], capsys)
        de = json.loads(out)
        assert (row["de"], row["de_orbits"]) == (de["de"], de["de_orbits"])
        _, out, _ = run_cli(["fm", "--d", str(d), "--t", str(t), "--json"], capsys)
        assert row["fm"] == json.loads(out)["fm"]
