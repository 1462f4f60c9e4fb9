import math

import numpy as np
import pytest

from pfq.comb import make_bandmap
from pfq.components import (BB, CF, FS, HWP, NPBS, PBS, PS, Circuit, CircuitError, ConfigurationError,
                            Mirror, apply, concat, leak_path, run_circuit, transfer_matrix)
from pfq.state import H, V, PhotonState, basis_state, global_phase_equal, mode, norm, superpose

from conftest import random_state

r = 1 / math.sqrt(2)
# independent 2x2 reference for the symmetric splitter
BS = r * np.array([[1, 1j], [1j, 1]])


def pair(state, k=0, pol=H):
    return np.array([state[mode(k, 0, 1, pol)], state[mode(k, 0, 2, pol)]])


def two_path(a, b, k=0, pol=H):
    return PhotonState({mode(k, 0, 1, pol): a, mode(k, 0, 2, pol): b})


def test_npbs_single_input_split():
    out = apply(NPBS(1, 2), two_path(1, 0))
    assert np.allclose(pair(out), [r, 1j * r], atol=1e-15)


def test_npbs_twice_is_phase_swap():
    expected = BS @ BS
    assert np.allclose(expected, [[0, 1j], [1j, 0]])
    twice = Circuit([NPBS(1, 2), NPBS(1, 2)])
    assert np.allclose(transfer_matrix_two_path(twice), expected, atol=1e-15)


def test_npbs_four_times_is_minus_identity():
    four = Circuit([NPBS(1, 2)] * 4)
    assert np.allclose(transfer_matrix_two_path(four), -np.eye(2), atol=1e-15)


def transfer_matrix_two_path(circuit):
    cols = [pair(run_circuit(circuit, two_path(*e))) for e in ((1, 0), (0, 1))]
    return np.column_stack(cols)


def test_npbs_full_constructive_interference():
    out = apply(NPBS(1, 2), two_path(r, 1j * r))
    assert np.allclose(pair(out), BS @ [r, 1j * r], atol=1e-15)
    assert np.allclose(pair(out), [0, 1j], atol=1e-15)


def test_npbs_leaves_other_paths():
    s = PhotonState({mode(0, 0, 3): 0.6, mode(0, 0, 1): 0.8})
    out = apply(NPBS(1, 2), s)
    assert out[mode(0, 0, 3)] == 0.6


@pytest.mark.parametrize("cls", [NPBS, PBS])
def test_splitters_need_distinct_ports(cls):
    with pytest.raises(CircuitError):
        cls(1, 1)


def test_pbs_transmits_h():
    out = apply(PBS(1, 2), basis_state(mode(0, 0, 1, H)))
    assert out == basis_state(mode(0, 0, 1, H))


def test_pbs_reflects_v_with_phase():
    out = apply(PBS(1, 2), basis_state(mode(0, 0, 1, V)))
    assert out[mode(0, 0, 2, V)] == 1j
    assert len(out) == 1


def test_pbs_preserves_norm_of_mixed_input(rng):
    s = random_state(rng)
    assert norm(apply(PBS(1, 2), s)) == pytest.approx(norm(s), abs=1e-12)


def test_fs_downconverts():
    out = apply(FS(1, dk=-1), basis_state(mode(1)))
    assert out == basis_state(mode(0))


def test_fs_efficiency_to_loss():
    out = apply(FS(1, 1, 0, eta=0.85), basis_state(mode(0)))
    assert out[mode(1)] == pytest.approx(math.sqrt(0.85), abs=1e-15)
    assert out.loss == pytest.approx(0.15, abs=1e-15)


def test_fs_leak_keeps_unconverted_mode():
    out = apply(FS(1, 1, 0, eta=0.85, leak=True), basis_state(mode(0)))
    assert out.loss == 0
    assert abs(out[mode(0, 0, leak_path(1))]) ** 2 == pytest.approx(0.15, abs=1e-15)
    assert norm(out) == pytest.approx(1.0, abs=1e-15)


def test_fs_null_shift_is_identity(rng):
    s = random_state(rng)
    assert apply(FS(1, 0, 0), s) == s


@pytest.mark.parametrize("eta", [0.0, -0.1, 1.5])
def test_fs_rejects_bad_efficiency(eta):
    with pytest.raises(CircuitError):
        FS(1, 1, 0, eta)


@pytest.mark.parametrize("eta", [1.0, 0.85, 0.3])
def test_fs_power_bookkeeping(rng, eta):
    s = random_state(rng)
    touched = sum(abs(a) ** 2 for md, a in s.items() if md.path == 1)
    out = apply(FS(1, 2, 1, eta), s)
    assert out.power() + out.loss == pytest.approx(s.power(), abs=1e-12)
    assert out.loss == pytest.approx((1 - eta) * touched, abs=1e-12)


def test_ps_examples(rng):
    assert apply(PS(1, math.pi), basis_state(mode(0)))[mode(0)] == pytest.approx(-1, abs=1e-15)
    s = random_state(rng)
    assert apply(PS(1, 0.0), s) == s
    assert norm(apply(PS(2, 1.234), s)) == pytest.approx(norm(s), abs=1e-12)


def test_ps_additive():
    s = superpose([(mode(0, 0, 1), 0.6), (mode(1, 0, 1), 0.8)])
    two = run_circuit(Circuit([PS(1, 0.3), PS(1, 0.9)]), s)
    one = run_circuit(Circuit([PS(1, 1.2)]), s)
    assert max(abs(two[m] - one[m]) for m in one) < 1e-15


def test_hwp_flips_and_is_involution(rng):
    out = apply(HWP(1), basis_state(mode(0, 0, 1, H)))
    assert out == basis_state(mode(0, 0, 1, V))
    s = random_state(rng)
    assert apply(HWP(1), apply(HWP(1), s)) == s
    assert apply(HWP(1), basis_state(mode(0, 0, 2, H))) == basis_state(mode(0, 0, 2, H))


def test_bb_examples():
    s = superpose([(mode(0, 0, 1), 0.6), (mode(0, 0, 2), 0.8)])
    out = apply(BB(1, 1), s)
    assert out[mode(0, 0, 1)] == -0.6 and out[mode(0, 0, 2)] == 0.8
    assert apply(BB(1, 0), s) == s
    with pytest.raises(CircuitError):
        BB(1, 2)


def test_mirror_swaps_paths():
    s = superpose([(mode(0, 0, 1), 0.6), (mode(1, 0, 2), 0.8j)])
    out = apply(Mirror(1, 2), s)
    assert out[mode(0, 0, 2)] == 0.6 and out[mode(1, 0, 1)] == 0.8j
    assert norm(out) == pytest.approx(norm(s))
    assert apply(Mirror(1), s) == s


def test_cf_routes_by_band():
    bm = make_bandmap(1, 1, "CF1")
    s = superpose([(mode(0), r), (mode(1), r)])
    out = apply(CF(1, 2, bm), s)
    assert out[mode(0, 0, 1)] == pytest.approx(r)
    assert out[mode(1, 0, 2)] == pytest.approx(1j * r)
    assert out[mode(1, 0, 1)] == 0 and out[mode(0, 0, 2)] == 0


def test_cf_crosstalk_powers():
    eps = 0.01
    row = np.array([[math.sqrt(1 - eps), 1j * math.sqrt(eps)], [1j * math.sqrt(eps), math.sqrt(1 - eps)]])
    # a REFLECT band exchanges the output ports of the PASS row
    expected = [abs(row[0, 0]) ** 2, abs(row[1, 0]) ** 2]
    out = apply(CF(1, 2, make_bandmap(1, 1, "CF1"), eps), basis_state(mode(1)))
    assert abs(out[mode(1, 0, 2)]) ** 2 == pytest.approx(expected[0], abs=1e-15)
    assert abs(out[mode(1, 0, 1)]) ** 2 == pytest.approx(expected[1], abs=1e-15)
    assert expected == pytest.approx([0.99, 0.01])


def test_cf_all_pass_is_identity(rng):
    # k=0 is a PASS band of this map
    bm = make_bandmap(1, 1, "CF1")
    s = superpose([(mode(0, 0, 1), 0.6), (mode(0, 0, 2), 0.8j)])
    assert apply(CF(1, 2, bm), s) == s


def test_cf_eps_zero_is_permutation_with_phases():
    bm = make_bandmap(3, 2, "CF1")
    for k in range(8):
        out = apply(CF(1, 2, bm), basis_state(mode(k)))
        port = 2 if bm.reflects(k) else 1
        assert abs(out[mode(k, 0, port)]) ** 2 == 1.0


def test_cf_out_of_grid_is_configuration_error():
    with pytest.raises(ConfigurationError):
        apply(CF(1, 2, make_bandmap(1, 1)), basis_state(mode(5)))


@pytest.mark.parametrize("eps", [-0.1, 1.0])
def test_cf_rejects_bad_crosstalk(eps):
    with pytest.raises(CircuitError):
        CF(1, 2, make_bandmap(1, 1), eps)


LOSSLESS = [NPBS(1, 2), PBS(1, 2), FS(1, 1, 1), FS(2, -1, 0), PS(1, 0.7), HWP(2), BB(1, 1),
            Mirror(1, 2), Mirror(1), CF(1, 2, make_bandmap(2, 1), 0.0), CF(1, 2, make_bandmap(2, 2, "CF2"), 0.2)]


@pytest.mark.parametrize("component", LOSSLESS, ids=lambda c: type(c).__name__)
def test_lossless_components_preserve_norm(rng, component):
    for _ in range(100):
        s = random_state(rng)
        out = apply(component, s)
        assert out.power() == pytest.approx(s.power(), abs=1e-12)
        assert out.loss == s.loss


@pytest.mark.parametrize("component", [HWP(1), BB(1, 1), Mirror(1, 2), Mirror(2)],
                         ids=lambda c: type(c).__name__)
def test_involutions_up_to_phase(rng, component):
    s = random_state(rng)
    assert global_phase_equal(apply(component, apply(component, s)), s, 1e-12)


def test_apply_rejects_non_component():
    with pytest.raises(CircuitError):
        apply("npbs", basis_state(mode(0)))


def test_circuit_rejects_undeclared_and_duplicate_paths():
    with pytest.raises(CircuitError, match="stage 1"):
        Circuit([PS(1, 0), PS(3, 0)], paths=(1, 2))
    with pytest.raises(CircuitError):
        Circuit([], paths=(1, 1))


def test_run_circuit_empty_and_precondition(rng):
    s = random_state(rng)
    assert run_circuit(Circuit(), s) == s
    with pytest.raises(CircuitError):
        run_circuit(Circuit([PS(1, 0)], paths=(1,)), s)


def test_run_circuit_attaches_stage_index():
    c = Circuit([PS(1, 0.1), CF(1, 2, make_bandmap(1, 1))])
    with pytest.raises(ConfigurationError) as err:
        run_circuit(c, basis_state(mode(3)))
    assert err.value.stage == 1


def test_concat_and_transfer_matrix():
    c = concat([Circuit([PS(1, math.pi)]), Circuit([PS(1, math.pi)])])
    assert len(c) == 2
    assert np.allclose(transfer_matrix(c, 2), np.eye(4), atol=1e-15)
