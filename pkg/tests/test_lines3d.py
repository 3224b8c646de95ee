"""Oriented lines of 3-space, the torus congruences, mesh export."""

import math
import types

import numpy as np
import pytest

from neutralkahler import (
    AnnulusGrid,
    SurfaceClass,
    TangentPoint,
    TorusFamily,
    el_residual,
    export_congruence,
    signature_profile,
    to_oriented_line,
    torus_section,
)
from neutralkahler.errors import AdmissibilityError, ChartError, DomainError
from neutralkahler.lines3d import direction_of


class TestTorusFamily:
    def test_admissibility(self):
        TorusFamily(1.0, 0.0)
        TorusFamily(1.0, -2.0)
        with pytest.raises(AdmissibilityError):
            TorusFamily(1.0, -3.0)
        with pytest.raises(AdmissibilityError):
            TorusFamily(-0.5, 0.0)

    def test_quartic_profile_values(self):
        section = torus_section(TorusFamily(1.0, 0.0))
        xi = 1.5 * np.exp(0.3j)
        expected = 1j * math.sqrt(1.0 + 1.5**4) * np.exp(0.3j)
        assert section.value(xi) == pytest.approx(expected)

    def test_degenerate_torus_values(self):
        section = torus_section(TorusFamily(1.0, 2.0))
        xi = 0.7 * np.exp(1.2j)
        expected = 1j * (1.0 + 0.49) * np.exp(1.2j)
        assert section.value(xi) == pytest.approx(expected)

    def test_branches_double_cover(self):
        up = torus_section(TorusFamily(1.0, 0.0, branch=1))
        down = torus_section(TorusFamily(1.0, 0.0, branch=-1))
        for r in (0.4, 1.0, 2.5):
            xi = r * np.exp(0.9j)
            assert up.value(xi) == pytest.approx(-down.value(xi))
            if r != 1.0:
                assert abs(up.value(xi)) > 0.0

    def test_stationarity_away_from_null_circle(self):
        section = torus_section(TorusFamily(2.0, 1.0))
        for r in (0.4, 0.8, 1.3, 2.2):
            assert abs(el_residual(section, r * np.exp(0.5j))) <= 1e-6


class TestSignatureProfile:
    def test_null_meridian(self):
        samples = signature_profile(TorusFamily(1.0, 0.0), [1.0])
        assert samples[0].classification is SurfaceClass.TOTALLY_NULL

    def test_supercritical_definite_with_sign_flip(self):
        # C2 > 2 B2: definite, opposite signs across the null circle
        samples = signature_profile(TorusFamily(1.0, 5.0), [0.3, 0.6, 1.7, 3.0])
        assert all(s.classification is SurfaceClass.RIEMANNIAN for s in samples)
        inner = {s.definite_sign for s in samples if s.r < 1.0}
        outer = {s.definite_sign for s in samples if s.r > 1.0}
        assert inner == {-1} and outer == {1}

    def test_subcritical_is_lorentz_off_the_null_circle(self):
        # C2 < 2 B2: the quartic-profile determinant (C2 - 2 B2)(1-R^2)^2/(1+R^2)^2
        # is negative on both sides of R = 1
        for fam in (TorusFamily(1.0, 0.0), TorusFamily(2.0, 1.0)):
            samples = signature_profile(fam, [0.5, 2.0])
            assert all(s.classification is SurfaceClass.LORENTZ for s in samples)
            assert all(s.definite_sign is None for s in samples)

    def test_degenerate_torus(self):
        samples = signature_profile(TorusFamily(1.0, 2.0), [0.5, 1.5, 3.0])
        assert all(s.classification is SurfaceClass.DEGENERATE for s in samples)

    def test_branch_swaps_definite_sides(self):
        plus = signature_profile(TorusFamily(1.0, 5.0, branch=1), [0.5, 2.0])
        minus = signature_profile(TorusFamily(1.0, 5.0, branch=-1), [0.5, 2.0])
        assert [s.definite_sign for s in plus] == [-s.definite_sign for s in minus]


class TestOrientedLines:
    def test_axis_anchor(self):
        line = to_oriented_line(TangentPoint(0.0, 0.0))
        assert np.allclose(line.direction, [0.0, 0.0, 1.0])
        assert np.allclose(line.foot, [0.0, 0.0, 0.0])

    def test_unit_fibre_pushforward(self):
        line = to_oriented_line(TangentPoint(0.0, 1.0))
        assert np.allclose(line.direction, [0.0, 0.0, 1.0])
        assert abs(line.foot @ line.direction) <= 1e-12
        # the foot is the image of d/dx under the FD Jacobian of the
        # direction parametrisation
        h = 1e-7
        jac_col = (direction_of(h) - direction_of(-h)) / (2.0 * h)
        assert np.allclose(line.foot, jac_col, atol=1e-6)
        assert np.linalg.norm(line.foot) == pytest.approx(2.0, abs=1e-12)

    def test_fd_jacobian_pushforward_general(self):
        xi, eta = 0.6 - 0.8j, 1.2 + 0.4j
        line = to_oriented_line(TangentPoint(xi, eta))
        h = 1e-7
        jx = (direction_of(xi + h) - direction_of(xi - h)) / (2.0 * h)
        jy = (direction_of(xi + 1j * h) - direction_of(xi - 1j * h)) / (2.0 * h)
        assert np.allclose(line.foot, eta.real * jx + eta.imag * jy, atol=1e-6)

    @pytest.mark.parametrize("angle", [math.pi / 2.0, 0.7, -1.3])
    def test_rotation_equivariance(self, angle):
        xi, eta = 0.8 + 0.2j, -0.5 + 1.1j
        phase = complex(math.cos(angle), math.sin(angle))
        rotated = to_oriented_line(TangentPoint(xi * phase, eta * phase))
        base = to_oriented_line(TangentPoint(xi, eta))
        rz = np.array(
            [
                [math.cos(angle), -math.sin(angle), 0.0],
                [math.sin(angle), math.cos(angle), 0.0],
                [0.0, 0.0, 1.0],
            ]
        )
        assert np.allclose(rotated.direction, rz @ base.direction, atol=1e-10)
        assert np.allclose(rotated.foot, rz @ base.foot, atol=1e-10)

    def test_nonfinite_chart_error(self):
        bad = types.SimpleNamespace(xi=complex("inf"), eta=0.0)
        with pytest.raises(ChartError):
            to_oriented_line(bad)

    def test_line_invariants_enforced(self):
        from neutralkahler import OrientedLine

        with pytest.raises(DomainError):
            OrientedLine(direction=np.array([0.0, 0.0, 2.0]), foot=np.zeros(3))
        with pytest.raises(DomainError):
            OrientedLine(direction=np.array([0.0, 0.0, 1.0]), foot=np.array([0.0, 0.0, 1.0]))


class TestExport:
    def grid16(self):
        return AnnulusGrid(0.3, 3.0, 16, 16)

    def test_obj_counts(self, tmp_path):
        section = torus_section(TorusFamily(1.0, 0.0))
        path = tmp_path / "torus.obj"
        segments = export_congruence(section, self.grid16(), 2.0, "obj", path)
        text = path.read_text().strip().split("\n")
        vertices = [l for l in text if l.startswith("v ")]
        faces = [l for l in text if l.startswith("f ")]
        assert segments == 256
        assert len(vertices) == 512
        assert len(faces) == 240
        for face in faces:
            ids = [int(tok) for tok in face.split()[1:]]
            assert len(ids) == 4
            assert all(1 <= i <= len(vertices) for i in ids)

    def test_csv_rows_and_orthogonality(self, tmp_path):
        section = torus_section(TorusFamily(1.0, 0.0))
        path = tmp_path / "torus.csv"
        grid = self.grid16()
        segments = export_congruence(section, grid, 2.0, "csv", path)
        lines = path.read_text().strip().split("\n")
        assert lines[0] == "R,theta,dx,dy,dz,fx,fy,fz"
        assert segments == len(grid.mesh_nodes()) == len(lines) - 1
        for row in lines[1:]:
            vals = [float(tok) for tok in row.split(",")]
            d, f = np.array(vals[2:5]), np.array(vals[5:8])
            assert np.linalg.norm(d) == pytest.approx(1.0, abs=1e-12)
            assert abs(d @ f) <= 1e-10

    def test_degenerate_torus_exports(self, tmp_path):
        section = torus_section(TorusFamily(1.0, 2.0))
        path = tmp_path / "degenerate.obj"
        assert export_congruence(section, self.grid16(), 1.0, "obj", path) == 256

    def test_bad_format_rejected(self, tmp_path):
        section = torus_section(TorusFamily(1.0, 0.0))
        with pytest.raises(DomainError):
            export_congruence(section, self.grid16(), 1.0, "stl", tmp_path / "x")

    def test_non_sphere_section_rejected(self, tmp_path, flat):
        from neutralkahler import polynomial_section

        section = polynomial_section(flat, {(1, 0): 1j})
        with pytest.raises(DomainError, match="round sphere"):
            export_congruence(section, self.grid16(), 1.0, "obj", tmp_path / "x.obj")
