import numpy as np
import pytest

import consensuskit as ck
from consensuskit.digraph import SpectralKind
from consensuskit.errors import NotStronglyConnectedError

from helpers import DEMO7, L7, has_spanning_out_tree, random_proper_matrix


def _graph(matrix, tol=ck.DEFAULT_TOL):
    return ck.build(ck.validate_stochastic(matrix, tol), tol)


class TestBuild:
    def test_identity_gives_loops_and_zero_kirchhoff(self):
        g, l = _graph(np.eye(2))
        assert g.arcs == ((0, 0, 1.0), (1, 1, 1.0))
        np.testing.assert_allclose(l.matrix, 0.0)

    def test_demo_network_kirchhoff(self):
        _, l = _graph(DEMO7)
        np.testing.assert_allclose(l.matrix, L7, atol=1e-12)

    def test_swap_matrix_has_no_loops(self):
        g, _ = _graph([[0.0, 1.0], [1.0, 0.0]])
        assert set(g.arcs) == {(1, 0, 1.0), (0, 1, 1.0)}

    def test_every_agent_has_an_in_arc(self):
        # Row sums are one, so every agent listens to someone.
        rng = np.random.default_rng(5)
        for _ in range(10):
            g, _ = _graph(random_proper_matrix(rng))
            targets = {v for _, v, _ in g.arcs}
            assert targets == set(range(g.n))


class TestDecompose:
    def test_demo_network_classes(self):
        g, _ = _graph(DEMO7)
        d = ck.decompose(g)
        assert d.classes == ((0, 1, 2), (3, 4), (5, 6))
        assert d.is_basic == (True, True, False)
        assert d.num_final_classes == 2
        assert d.num_basic_agents == 5
        assert d.order == (0, 1, 2, 3, 4, 5, 6)

    def test_identity_gives_singleton_final_classes(self):
        g, _ = _graph(np.eye(3))
        d = ck.decompose(g)
        assert d.num_final_classes == 3
        assert d.num_basic_agents == 3
        assert all(d.is_basic)

    def test_two_cycle_is_one_final_class(self):
        g, _ = _graph([[0.0, 1.0], [1.0, 0.0]])
        d = ck.decompose(g)
        assert d.classes == ((0, 1),)
        assert d.num_final_classes == 1

    def test_permuted_kirchhoff_is_lower_block_triangular(self, proper_batch):
        for p in proper_batch:
            g, l = _graph(p)
            d = ck.decompose(g)
            lp = d.permute(l.matrix)
            offsets = d.class_offsets()
            for ci, off in enumerate(offsets):
                hi = off + d.sizes[ci]
                assert np.max(np.abs(lp[off:hi, hi:])) == 0.0

    def test_final_classes_receive_no_outside_arcs(self, proper_batch):
        for p in proper_batch:
            g, _ = _graph(p)
            d = ck.decompose(g)
            for cls, basic in zip(d.classes, d.is_basic):
                incoming = [u for u, v, _ in g.arcs if v in set(cls) and u not in set(cls)]
                assert basic == (not incoming)


class TestClassPeriod:
    def test_two_cycle_without_loops(self):
        g, _ = _graph([[0.0, 1.0], [1.0, 0.0]])
        assert ck.class_period(g, (0, 1)) == 2

    def test_two_cycle_with_one_loop(self):
        g, _ = _graph([[0.5, 0.5], [1.0, 0.0]])
        assert ck.class_period(g, (0, 1)) == 1

    def test_demo_bloc_is_aperiodic(self):
        g, _ = _graph(DEMO7)
        assert ck.class_period(g, (0, 1, 2)) == 1

    def test_three_cycle(self):
        g, _ = _graph([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
        assert ck.class_period(g, (0, 1, 2)) == 3

    def test_rejects_disconnected_set(self):
        g, _ = _graph(DEMO7)
        with pytest.raises(NotStronglyConnectedError):
            ck.class_period(g, (0, 3))


class TestSpectralClass:
    def test_demo_network_is_proper_not_regular(self):
        sto = ck.validate_stochastic(DEMO7)
        d = ck.decompose(ck.build(sto)[0])
        spec = ck.spectral_class(sto, d)
        assert spec.kind is SpectralKind.PROPER_NOT_REGULAR
        assert spec.periods == (1, 1)
        assert spec.is_proper

    def test_swap_matrix_is_improper(self):
        sto = ck.validate_stochastic([[0.0, 1.0], [1.0, 0.0]])
        d = ck.decompose(ck.build(sto)[0])
        spec = ck.spectral_class(sto, d)
        assert spec.kind is SpectralKind.IMPROPER
        assert not spec.is_proper

    def test_positive_matrix_is_regular(self):
        sto = ck.validate_stochastic([[0.5, 0.5], [0.5, 0.5]])
        d = ck.decompose(ck.build(sto)[0])
        assert ck.spectral_class(sto, d).kind is SpectralKind.REGULAR


class TestExportDot:
    def test_single_agent(self):
        g, _ = _graph(np.eye(1))
        d = ck.decompose(g)
        dot = ck.export_dot(g, d)
        assert dot.startswith("digraph influence {")
        assert '"1" -> "1" [label="1"];' in dot

    def test_demo_network_clusters(self):
        g, _ = _graph(DEMO7)
        d = ck.decompose(g)
        dot = ck.export_dot(g, d)
        assert dot.count("subgraph cluster_") == 3
        assert dot.count("(final)") == 2
        assert dot.count("(nonbasic)") == 1
        for agent in range(1, 8):
            assert f'"{agent}";' in dot

    def test_deterministic(self):
        g, _ = _graph(DEMO7)
        d = ck.decompose(g)
        assert ck.export_dot(g, d) == ck.export_dot(g, d)


class TestStructuralInvariants:
    def test_kirchhoff_rows_and_signs(self, proper_batch):
        for p in proper_batch:
            _, l = _graph(p)
            lm = l.matrix
            np.testing.assert_allclose(lm @ np.ones(len(lm)), 0.0, atol=1e-12)
            off = lm - np.diag(np.diag(lm))
            assert np.max(off) <= 1e-12

    def test_rank_and_kernel_dimensions(self, proper_batch):
        for p in proper_batch:
            g, l = _graph(p)
            d = ck.decompose(g)
            n = g.n
            rank_l = ck.rank_with_tolerance(l.matrix)
            assert rank_l == n - d.num_final_classes
            assert ck.rank_with_tolerance(l.matrix @ l.matrix) == rank_l  # index one
            kernel = ck.null_space_basis(l.matrix)
            assert kernel.shape[1] == d.num_final_classes

    def test_single_final_class_iff_spanning_out_tree(self, proper_batch):
        for p in proper_batch:
            g, _ = _graph(p)
            d = ck.decompose(g)
            assert (d.num_final_classes == 1) == has_spanning_out_tree(g.n, g.arcs)

    def test_permuted_diagonal_blocks_are_class_kirchhoffs(self):
        g, l = _graph(DEMO7)
        d = ck.decompose(g)
        lp = d.permute(l.matrix)
        np.testing.assert_allclose(lp[:3, :3], np.asarray(L7)[:3, :3], atol=1e-12)
        np.testing.assert_allclose(lp[3:5, 3:5], np.asarray(L7)[3:5, 3:5], atol=1e-12)
