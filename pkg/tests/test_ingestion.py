import re

import numpy as np
import pytest

import contourstat as cs
from support import wobbly_points


def write_pgm_p5(path, values, maxval=255):
    h, w = values.shape
    header = f"P5\n{w} {h}\n{maxval}\n".encode("ascii")
    path.write_bytes(header + values.astype(np.uint8).tobytes())


def write_pgm_p2(path, values, maxval=255):
    h, w = values.shape
    rows = "\n".join(" ".join(str(int(v)) for v in row) for row in values)
    path.write_text(f"P2\n# comment line\n{w} {h}\n{maxval}\n{rows}\n", encoding="ascii")


def blob_mask(seed, size=48):
    """Star-shaped blob with a smooth wobbly radius; single 8-connected component."""
    rng = np.random.default_rng(seed)
    cy, cx = rng.uniform(size * 0.4, size * 0.6, 2)
    r0 = rng.uniform(size * 0.18, size * 0.28)
    phases = rng.uniform(0, 2 * np.pi, 3)
    amps = rng.uniform(0.02, 0.08, 3) * r0
    yy, xx = np.mgrid[0:size, 0:size]
    ang = np.arctan2(yy - cy, xx - cx)
    r = r0 + sum(a * np.cos((m + 1) * ang + p) for m, (a, p) in enumerate(zip(amps, phases)))
    return np.hypot(yy - cy, xx - cx) <= r


class TestReadCsv:
    def test_four_point_contour(self, tmp_path):
        f = tmp_path / "c.csv"
        f.write_text("1,0\n0,1\n-1,0\n0,-1\n")
        c = cs.read_contour(f)
        assert np.array_equal(c.points, [1, 1j, -1, -1j])

    def test_duplicate_closing_point_dropped(self, tmp_path):
        f = tmp_path / "c.csv"
        f.write_text("0,0\n1,0\n1,1\n0,1\n0,0\n")
        assert len(cs.read_contour(f)) == 4

    def test_malformed_line_reports_line_number(self, tmp_path):
        f = tmp_path / "c.csv"
        f.write_text("1,0\n0,1\nnope\n0,-1\n")
        with pytest.raises(cs.ParseError, match=r":3"):
            cs.read_contour(f)

    def test_wrong_field_count_reports_line_number(self, tmp_path):
        f = tmp_path / "c.csv"
        f.write_text("1,0\n0,1,2\n-1,0\n")
        with pytest.raises(cs.ParseError, match=r":2"):
            cs.read_contour(f)

    def test_too_few_distinct_points(self, tmp_path):
        f = tmp_path / "c.csv"
        f.write_text("0,0\n1,1\n")
        with pytest.raises(cs.ParseError):
            cs.read_contour(f)

    def test_near_duplicate_points_merged(self, tmp_path):
        f = tmp_path / "c.csv"
        eps = 1e-15
        f.write_text(f"0,0\n{eps},0\n1,0\n1,1\n0,1\n")
        assert len(cs.read_contour(f)) == 4


class TestWriteContour:
    def test_round_trip_exact(self, tmp_path):
        rng = np.random.default_rng(0)
        pts = rng.standard_normal(300) * 10 + 1j * rng.standard_normal(300)
        original = cs.Contour(pts)
        f = tmp_path / "out.csv"
        cs.write_contour(original, f)
        again = cs.read_contour(f)
        assert np.array_equal(again.points, original.points)

    def test_round_trip_property_random_contours(self, tmp_path):
        for seed in range(20):
            rng = np.random.default_rng(seed)
            pts = rng.uniform(-1e3, 1e3, 40) + 1j * rng.uniform(-1e3, 1e3, 40)
            original = cs.Contour(pts)
            f = tmp_path / f"c{seed}.csv"
            cs.write_contour(original, f)
            assert np.array_equal(cs.read_contour(f).points, original.points)

    def test_decimal_point_always_dot(self, tmp_path):
        f = tmp_path / "out.csv"
        cs.write_contour(cs.Contour([0.5 + 0.25j, 1.5 + 0j, 0.75 + 1j]), f)
        text = f.read_text()
        assert re.fullmatch(r"(-?[\d.e+-]+,-?[\d.e+-]+\n)+", text)
        assert ";" not in text

    def test_only_contours_accepted(self, tmp_path):
        with pytest.raises(TypeError):
            cs.write_contour([1, 2, 3], tmp_path / "out.csv")


class TestReadMask:
    def test_3x3_all_foreground_border_pixels_in_order(self, tmp_path):
        f = tmp_path / "m.pgm"
        write_pgm_p5(f, np.ones((3, 3), dtype=np.uint8) * 7)
        c = cs.read_contour(f)
        # hand enumeration of the Moore trace from pixel (row 0, col 0), entered
        # from the west, then normalized counterclockwise (y grows upward)
        expected = [0 + 2j, 0 + 1j, 0 + 0j, 1 + 0j, 2 + 0j, 2 + 1j, 2 + 2j, 1 + 2j]
        assert np.array_equal(c.points, expected)

    def test_p2_and_p5_agree(self, tmp_path):
        mask = blob_mask(3).astype(np.uint8) * 255
        f5 = tmp_path / "a.pgm"
        f2 = tmp_path / "b.pgm"
        write_pgm_p5(f5, mask)
        write_pgm_p2(f2, mask)
        assert np.array_equal(cs.read_contour(f5).points, cs.read_contour(f2).points)

    def test_two_blobs_error_names_count(self, tmp_path):
        mask = np.zeros((20, 20), dtype=np.uint8)
        mask[2:6, 2:6] = 1
        mask[12:16, 12:16] = 1
        f = tmp_path / "m.pgm"
        write_pgm_p5(f, mask)
        with pytest.raises(cs.MaskError, match="2"):
            cs.read_contour(f)

    def test_empty_mask_rejected(self, tmp_path):
        f = tmp_path / "m.pgm"
        write_pgm_p5(f, np.zeros((5, 5), dtype=np.uint8))
        with pytest.raises(cs.MaskError, match="no foreground"):
            cs.read_contour(f)

    def test_malformed_header(self, tmp_path):
        f = tmp_path / "m.pgm"
        f.write_bytes(b"P7\n3 3\n255\n" + bytes(9))
        with pytest.raises(cs.ParseError):
            cs.read_contour(f)

    def test_truncated_raster(self, tmp_path):
        f = tmp_path / "m.pgm"
        f.write_bytes(b"P5\n4 4\n255\n" + bytes(7))
        with pytest.raises(cs.ParseError, match="truncated"):
            cs.read_contour(f)

    def test_counterclockwise_after_normalization(self, tmp_path):
        f = tmp_path / "m.pgm"
        write_pgm_p5(f, blob_mask(11).astype(np.uint8))
        pts = cs.read_contour(f).points
        nxt = np.roll(pts, -1)
        assert 0.5 * np.sum(np.imag(np.conj(pts) * nxt)) > 0

    def test_trace_is_simple_closed_pixel_path_on_random_blobs(self, tmp_path):
        for seed in range(100):
            f = tmp_path / f"blob{seed}.pgm"
            write_pgm_p5(f, blob_mask(seed).astype(np.uint8))
            pts = cs.read_contour(f).points
            assert len(np.unique(pts)) == len(pts)  # no repeated pixel
            assert pts[0] != pts[-1]  # closure implicit, not duplicated


class TestManifest:
    def make_files(self, tmp_path, n=3, K=80):
        names = []
        for i in range(n):
            f = tmp_path / f"c{i}.csv"
            cs.write_contour(cs.Contour(wobbly_points(K, phase=0.3 * i)), f)
            names.append(f.name)
        return names

    def test_parse_and_defaults(self, tmp_path):
        names = self.make_files(tmp_path)
        man = tmp_path / "sample.manifest"
        man.write_text(
            "# demo manifest\nseed 42\nk 40\ncorrespondence shared-times\n"
            + "".join(f"contour id{i} {n}\n" for i, n in enumerate(names))
        )
        m = cs.parse_manifest(man)
        assert m.seed == 42
        assert m.k == 40
        assert m.strategy == "shared-times"
        assert len(m.entries) == 3

    def test_unknown_directive_rejected(self, tmp_path):
        man = tmp_path / "bad.manifest"
        man.write_text("speed 42\n")
        with pytest.raises(cs.ManifestError, match="bad.manifest:1"):
            cs.parse_manifest(man)

    def test_duplicate_ids_rejected(self, tmp_path):
        names = self.make_files(tmp_path, n=2)
        man = tmp_path / "dup.manifest"
        man.write_text(f"contour same {names[0]}\ncontour same {names[1]}\n")
        with pytest.raises(cs.ManifestError, match="same"):
            cs.parse_manifest(man)

    def test_empty_manifest_rejected(self, tmp_path):
        man = tmp_path / "empty.manifest"
        man.write_text("seed 1\n")
        with pytest.raises(cs.ManifestError):
            cs.parse_manifest(man)

    def test_load_sample_identical_files_identical_preshapes(self, tmp_path):
        f = tmp_path / "c.csv"
        cs.write_contour(cs.Contour(wobbly_points(100)), f)
        man = tmp_path / "m.manifest"
        man.write_text("k 30\nseed 5\ncontour a c.csv\ncontour b c.csv\ncontour c c.csv\n")
        shapes, times = cs.load_sample(cs.parse_manifest(man))
        assert times.k == 30
        assert len(shapes) == 3
        for s in shapes[1:]:
            assert np.array_equal(s.coords, shapes[0].coords)

    def test_load_sample_failure_names_entry(self, tmp_path):
        names = self.make_files(tmp_path, n=1)
        man = tmp_path / "m.manifest"
        man.write_text(f"contour good {names[0]}\ncontour broken missing.csv\n")
        with pytest.raises(cs.ManifestError, match="broken"):
            cs.load_sample(cs.parse_manifest(man))

    def test_union_of_one_curve_matches_shared(self, tmp_path):
        names = self.make_files(tmp_path, n=1)
        man_s = tmp_path / "s.manifest"
        man_u = tmp_path / "u.manifest"
        man_s.write_text(f"k 25\nseed 9\ncorrespondence shared-times\ncontour a {names[0]}\n")
        man_u.write_text(f"k 25\nseed 9\ncorrespondence union-of-times\ncontour a {names[0]}\n")
        shapes_s, times_s = cs.load_sample(cs.parse_manifest(man_s))
        shapes_u, times_u = cs.load_sample(cs.parse_manifest(man_u))
        assert np.array_equal(times_s.times, times_u.times)
        assert np.array_equal(shapes_s[0].coords, shapes_u[0].coords)

    def test_load_sample_deterministic(self, tmp_path):
        names = self.make_files(tmp_path)
        man = tmp_path / "m.manifest"
        man.write_text(
            "k 20\nseed 31\n" + "".join(f"contour id{i} {n}\n" for i, n in enumerate(names))
        )
        a, ta = cs.load_sample(cs.parse_manifest(man))
        b, tb = cs.load_sample(cs.parse_manifest(man))
        assert np.array_equal(ta.times, tb.times)
        for x, y in zip(a, b):
            assert np.array_equal(x.coords, y.coords)
