import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from betlab.errors import DomainError
from betlab.games import (
    MATCHING_PENNIES,
    PENNIES_MATRIX,
    Alternator,
    BestResponder,
    Biased,
    CoinFlip,
    Fixed,
    FrequencyExploiter,
    GameTranscript,
    PayoffMatrix,
    frequency_exploiter,
    parse_strategy,
    play_match,
    responder_expected_gain,
    spy_match,
    write_transcript_csv,
)


class TestPayoffs:
    def test_matching_pennies_cells(self):
        assert MATCHING_PENNIES[("H", "H")] == (1, -1)
        assert MATCHING_PENNIES[("H", "T")] == (-1, 1)
        assert MATCHING_PENNIES[("T", "H")] == (-1, 1)
        assert MATCHING_PENNIES[("T", "T")] == (1, -1)
        assert PENNIES_MATRIX.cells == MATCHING_PENNIES

    def test_rejects_non_zero_sum(self):
        cells = dict(MATCHING_PENNIES)
        cells[("H", "H")] = (1, 0)
        with pytest.raises(DomainError):
            PayoffMatrix(cells=cells)


class TestPlayMatch:
    def test_value_zero_game(self):
        t = play_match(CoinFlip(), CoinFlip(), 100_000, root_seed=3)
        se = 1.0 / math.sqrt(t.n_rounds)
        assert abs(t.total_gain1 / t.n_rounds) < 3 * se

    def test_coinflip_neutralizes_fixed_opponent(self):
        t = play_match(CoinFlip(), Fixed("H"), 100_000, root_seed=5)
        se = 1.0 / math.sqrt(t.n_rounds)
        assert abs(t.total_gain1 / t.n_rounds) < 3 * se

    def test_zero_sum_every_round(self):
        t = play_match(Biased(0.7), Alternator(), 500, root_seed=1, stake=2.0)
        assert np.all(t.gains1 + t.gains2 == 0.0)
        assert set(np.unique(t.gains1)) <= {2.0, -2.0}

    def test_rake_drains_both(self):
        t = play_match(CoinFlip(), CoinFlip(), 100, root_seed=2, rake=0.1)
        assert t.total_gain1 + t.total_gain2 == pytest.approx(-0.1 * 100)

    def test_deterministic_given_seed(self):
        a = play_match(Biased(0.6), FrequencyExploiter(), 400, root_seed=9)
        b = play_match(Biased(0.6), FrequencyExploiter(), 400, root_seed=9)
        assert np.array_equal(a.choices1, b.choices1)
        assert np.array_equal(a.choices2, b.choices2)
        assert np.array_equal(a.gains2, b.gains2)

    def test_vectorized_path_matches_round_loop(self):
        # strip the i.i.d. marker to force the loop; transcripts must agree
        class LoopBiased(Biased):
            def __init__(self, p_h):
                super().__init__(p_h)
                self.iid_p_h = None

        fast = play_match(Biased(0.6), Biased(0.3), 500, root_seed=11)
        slow = play_match(LoopBiased(0.6), LoopBiased(0.3), 500, root_seed=11)
        assert np.array_equal(fast.choices1, slow.choices1)
        assert np.array_equal(fast.choices2, slow.choices2)

    def test_rejects_bad_args(self):
        with pytest.raises(DomainError):
            play_match(CoinFlip(), CoinFlip(), 0, root_seed=1)
        with pytest.raises(DomainError):
            play_match(CoinFlip(), CoinFlip(), 10, root_seed=1, stake=0.0)


class TestResponderGain:
    def test_published_number(self):
        gain = responder_expected_gain(0.6, 0.6, 100, 200.0)
        assert gain == pytest.approx(8.0, abs=1e-9)

    def test_full_tilt(self):
        assert responder_expected_gain(0.6, 1.0, 100, 200.0) == pytest.approx(40.0)

    def test_unbiased_opponent_unexploitable(self):
        for x in [0.0, 0.3, 1.0]:
            assert responder_expected_gain(0.5, x, 10, 100.0) == pytest.approx(0.0)

    @given(
        p_h=st.floats(min_value=0.0, max_value=1.0),
        x=st.floats(min_value=0.0, max_value=1.0),
    )
    def test_bilinear_sign_flips(self, p_h, x):
        base = responder_expected_gain(p_h, x, 10, 100.0)
        assert responder_expected_gain(1 - p_h, x, 10, 100.0) == pytest.approx(-base)
        assert responder_expected_gain(p_h, 1 - x, 10, 100.0) == pytest.approx(-base)

    def test_monte_carlo_agreement(self):
        # player 2 plays T with prob 0.6 <=> H with prob 0.4
        n = 200_000
        stake = 200.0 / 100
        t = play_match(Biased(0.6), Biased(0.4), n, root_seed=29, stake=stake)
        per_round = responder_expected_gain(0.6, 0.6, 100, 200.0) / 100
        se = stake / math.sqrt(n)
        assert abs(t.total_gain2 / n - per_round) < 3 * se


class TestSpyMatch:
    def test_plus_one_per_round(self):
        t = spy_match(CoinFlip(), 100, root_seed=7)
        assert t.total_gain2 == 100.0
        assert np.all(t.gains2 == 1.0)

    def test_single_round(self):
        assert spy_match(Biased(0.9), 1, root_seed=1).total_gain2 == 1.0

    def test_zero_variance(self):
        t = spy_match(CoinFlip(), 10_000, root_seed=3, stake=2.5)
        assert float(np.var(t.gains2)) == 0.0
        assert t.total_gain2 == pytest.approx(2.5 * 10_000)


class TestFrequencyExploiter:
    def test_locks_onto_fixed_opponent(self):
        t = play_match(Fixed("H"), FrequencyExploiter(k=2), 50, root_seed=9)
        # first context is tabulated after round 3; exploitation is
        # perfect from round 4 on
        assert np.all(t.gains2[3:] == 1.0)
        assert np.all(t.choices2[3:] == "T")

    def test_cracks_alternation(self):
        t = play_match(Alternator("H"), FrequencyExploiter(k=2), 60, root_seed=9)
        # both alternation contexts are known after round 4; rounds 3 and 4
        # land on never-seen contexts and stay coin flips
        assert np.all(t.gains2[4:] == 1.0)

    def test_fair_coin_is_unexploitable(self):
        t = play_match(CoinFlip(), FrequencyExploiter(k=2), 20_000, root_seed=17)
        se = 1.0 / math.sqrt(t.n_rounds)
        assert abs(t.total_gain2 / t.n_rounds) < 3 * se

    def test_learns_static_bias(self):
        t = play_match(Biased(0.6), FrequencyExploiter(k=2), 20_000, root_seed=19)
        tail = t.gains2[10_000:]
        # every context's conditional distribution favors H, so the
        # exploiter converges to always-T: 0.2 per round in expectation
        assert tail.mean() > 0.15

    def test_never_loses_to_iid_grid(self):
        for p_h in np.arange(0.1, 0.95, 0.1):
            t = play_match(Biased(p_h), FrequencyExploiter(k=2), 4000, root_seed=23)
            se = 1.0 / math.sqrt(t.n_rounds)
            assert t.total_gain2 / t.n_rounds >= -3 * se

    def test_functional_form(self):
        assert frequency_exploiter(["H"] * 10, k=2, player=2) == "T"
        assert frequency_exploiter(["H"] * 10, k=2, player=1) == "H"
        assert frequency_exploiter([], k=2) in ("H", "T")
        with pytest.raises(DomainError):
            frequency_exploiter(["H", "X"], k=2)

    def test_context_order_bounds(self):
        with pytest.raises(DomainError):
            FrequencyExploiter(k=0)
        with pytest.raises(DomainError):
            FrequencyExploiter(k=9)


class TestBestResponder:
    def test_player_two_against_announced_bias(self):
        t = play_match(Biased(0.75), BestResponder(0.75), 40_000, root_seed=31)
        assert np.all(t.choices2 == "T")
        se = 1.0 / math.sqrt(t.n_rounds)
        assert abs(t.total_gain2 / t.n_rounds - 0.5) < 3 * se

    def test_role_awareness(self):
        t = play_match(BestResponder(0.75), Biased(0.75), 40_000, root_seed=33)
        assert np.all(t.choices1 == "H")
        se = 1.0 / math.sqrt(t.n_rounds)
        assert abs(t.total_gain1 / t.n_rounds - 0.5) < 3 * se


class TestMinimaxGuarantee:
    def test_coinflip_safe_against_adversaries(self):
        adversaries = [
            lambda: Fixed("H"),
            lambda: Biased(0.9),
            lambda: Alternator("T"),
            lambda: FrequencyExploiter(k=2),
            lambda: BestResponder(0.9),
        ]
        for make in adversaries:
            total = 0.0
            rounds = 0
            for seed in range(40):
                t = play_match(CoinFlip(), make(), 400, root_seed=1000 + seed)
                total += t.total_gain1
                rounds += t.n_rounds
            se = 1.0 / math.sqrt(rounds)
            assert abs(total / rounds) < 4 * se


class TestParseAndExport:
    @pytest.mark.parametrize(
        "text,cls",
        [
            ("coinflip", CoinFlip),
            ("biased:0.6", Biased),
            ("fixed:H", Fixed),
            ("alternator", Alternator),
            ("alternator:T", Alternator),
            ("exploiter", FrequencyExploiter),
            ("exploiter:k=3", FrequencyExploiter),
            ("bestresponse:0.75", BestResponder),
        ],
    )
    def test_parse_strategy(self, text, cls):
        assert isinstance(parse_strategy(text), cls)

    def test_parse_strategy_k(self):
        assert parse_strategy("exploiter:k=3").k == 3

    @pytest.mark.parametrize("text", ["nope", "biased:x", "fixed:Q", "exploiter:k=0"])
    def test_parse_rejects(self, text):
        with pytest.raises(DomainError):
            parse_strategy(text)

    def test_transcript_csv(self):
        t = play_match(Fixed("H"), Fixed("T"), 2, root_seed=1, stake=2.0)
        buf = io.StringIO()
        write_transcript_csv(t, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "round,choice1,choice2,gain1,gain2"
        assert lines[1] == "1,H,T,-2,2"
        assert len(lines) == 3

    def test_transcript_rejects_unbalanced(self):
        with pytest.raises(DomainError):
            GameTranscript(
                choices1=np.array(["H"]),
                choices2=np.array(["T"]),
                gains1=np.array([1.0]),
                gains2=np.array([1.0]),
                stake=1.0,
            )
