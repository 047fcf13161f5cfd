import json
import subprocess
import sys

from latticecft.cli import render_report, run

A2 = "[[2,1],[1,2]]"
SPHERE = '{"components":[{"genus":0,"boundaries":[]}]}'
TORUS = '{"components":[{"genus":1,"boundaries":[]}]}'


def invoke(argv):
    code, payload, _ = run(argv)
    return code, json.loads(payload.decode())


class TestDisc:
    def test_inline_a1(self):
        code, rep = invoke(["disc", "--lattice", "[[2]]"])
        assert code == 0
        assert rep["results"]["invariant_factors"] == [2]
        assert rep["results"]["order"] == 2
        assert rep["format"] == 1
        assert {"command", "inputs_digest", "seed", "results"} <= set(rep)

    def test_file_input(self, tmp_path):
        path = tmp_path / "lat.json"
        path.write_text('{"gram": [[2,1],[1,2]]}')
        code, rep = invoke(["disc", "--lattice", str(path)])
        assert code == 0 and rep["results"]["order"] == 3

    def test_malformed_json(self):
        code, rep = invoke(["disc", "--lattice", "[[2,"])
        assert code == 2
        assert rep["error_kind"] == "parse"

    def test_odd_diagonal_error_kind(self):
        code, rep = invoke(["disc", "--lattice", "[[1]]"])
        assert code == 2
        assert rep["error_kind"] == "OddDiagonal"


class TestBlocks:
    def test_sphere_dimension_one(self):
        code, rep = invoke(["blocks", "--surface", SPHERE])
        assert code == 0 and rep["results"]["dimension"] == 1

    def test_torus_with_lattice(self):
        code, rep = invoke(["blocks", "--surface", TORUS, "--lattice", A2])
        assert code == 0 and rep["results"]["dimension"] == 3

    def test_labeled_boundary(self):
        surf = ('{"components":[{"genus":1,"boundaries":'
                '[{"id":"c","orientation":"out"}]}]}')
        code, rep = invoke(["blocks", "--surface", surf, "--lattice", A2,
                            "--labels", '{"c": [1]}'])
        assert code == 0 and rep["results"]["dimension"] == 0


class TestFactorize:
    def test_genus_two_split(self):
        genus2 = '{"components":[{"genus":2,"boundaries":[]}]}'
        pieces = ('[{"components":[{"genus":1,"boundaries":'
                  '[{"id":"x","orientation":"out"}]}]},'
                  '{"components":[{"genus":1,"boundaries":'
                  '[{"id":"y","orientation":"in"}]}]}]')
        code, rep = invoke(["factorize", "--surface", genus2,
                            "--pieces", pieces,
                            "--matching", '[["x","y"]]',
                            "--lattice", "[[2]]", "--terms"])
        assert code == 0
        assert rep["results"]["lhs"] == rep["results"]["rhs"] == 4
        assert rep["results"]["equal"] is True
        assert len(rep["results"]["terms"]) == 2

    def test_invalid_split_error(self):
        genus2 = '{"components":[{"genus":2,"boundaries":[]}]}'
        code, rep = invoke(["factorize", "--surface", genus2,
                            "--pieces", f"[{TORUS}]", "--matching", "[]"])
        assert code == 2 and rep["error_kind"] == "InvalidSplit"


class TestModular:
    def test_relations_hold(self):
        code, rep = invoke(["modular", "--lattice", A2])
        assert code == 0
        assert rep["results"]["ok"] is True
        assert rep["results"]["signature_mod8"] == 2
        assert rep["results"]["central_charge_exponent"] == "2"


class TestVerlinde:
    def test_sphere(self):
        code, rep = invoke(["verlinde", "--surface", SPHERE,
                            "--lattice", A2])
        assert code == 0
        assert rep["results"]["rounded"] == rep["results"]["block_dimension"] == 1


class TestTheta:
    def test_theta3(self):
        code, rep = invoke(["theta", "--tau", '{"re": 0, "im": 1}',
                            "--z", "0", "--char", "0,0", "--tol", "1e-10"])
        assert code == 0
        res = rep["results"]
        assert abs(res["value_re"] - 1.0864348112133080) < 1e-9
        assert abs(res["value_im"]) < 1e-12
        assert res["tail_bound"] < 1e-10
        assert isinstance(res["R"], int)

    def test_fraction_characteristics(self):
        code, rep = invoke(["theta", "--tau", '{"re": 0, "im": 1}',
                            "--z", "0", "--char", '"1/2","1/2"'])
        assert code == 0
        assert abs(rep["results"]["value_re"]) < 1e-12
        assert abs(rep["results"]["value_im"]) < 1e-12


class TestFock:
    def test_character_vacuum(self):
        code, rep = invoke(["fock", "character", "--lattice", "[[2]]",
                            "--phi", "0", "--max-energy", "3"])
        assert code == 0
        assert rep["results"]["ground_energy"] == "0"
        assert rep["results"]["coefficients"] == [1, 3, 4, 7]

    def test_character_twisted(self):
        code, rep = invoke(["fock", "character", "--lattice", "[[2]]",
                            "--phi", "1", "--max-energy", "2"])
        assert code == 0
        assert rep["results"]["ground_energy"] == "1/4"
        assert rep["results"]["coefficients"] == [2, 2, 6]


class TestHeisenberg:
    def test_export(self):
        code, rep = invoke(["heisenberg", "--lattice", "[[2]]", "--genus", "1"])
        assert code == 0
        res = rep["results"]
        assert res["dimension"] == 2
        assert len(res["generators"]) == 2


class TestDeterminism:
    def test_byte_identical_reports(self):
        argv = ["disc", "--lattice", A2, "--seed", "42"]
        assert render_report(argv) == render_report(argv)

    def test_seed_recorded(self):
        code, rep = invoke(["disc", "--lattice", A2, "--seed", "7"])
        assert rep["seed"] == 7

    def test_output_file(self, tmp_path):
        out = tmp_path / "report.json"
        proc = subprocess.run(
            [sys.executable, "-m", "latticecft", "disc", "--lattice", "[[2]]",
             "--output", str(out)],
            capture_output=True)
        assert proc.returncode == 0
        data = json.loads(out.read_text())
        assert data["results"]["order"] == 2


class TestExitCodes:
    def test_verification_failure_is_exit_one(self, tmp_path):
        # a lying surface: claim the factorization of a torus against genus 2
        genus2 = '{"components":[{"genus":2,"boundaries":[]}]}'
        pieces = ('[{"components":[{"genus":1,"boundaries":'
                  '[{"id":"p","orientation":"out"},'
                  '{"id":"q","orientation":"in"}]}]}]')
        code, rep = invoke(["factorize", "--surface", genus2,
                            "--pieces", pieces, "--matching", '[["p","q"]]',
                            "--lattice", "[[2]]"])
        # this split is valid and the identity holds, so exit 0;
        # the exit-1 path is exercised through accept --defect below
        assert code == 0 and rep["results"]["equal"] is True

    def test_accept_defect_fails(self):
        code, rep = invoke(["accept", "--defect", "s_sign_flip"])
        assert code == 1
        by_id = {row["id"]: row["passed"] for row in rep["results"]["criteria"]}
        assert by_id[5] is False
        assert rep["results"]["all_passed"] is False
