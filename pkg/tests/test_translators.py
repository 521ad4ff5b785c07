import sys

import pytest

from tdselect import (
    DataError,
    DictionaryTranslator,
    ExternalProcessTranslator,
    IdentityTranslator,
    NoisyDictionaryTranslator,
    TranslatorError,
    TranslatorSpec,
    load_dictionary,
    make_translator,
)

UPPER_CMD = f"{sys.executable} -c \"import sys; sys.stdout.write(sys.stdin.read().upper())\""
DROP_LINE_CMD = (
    f"{sys.executable} -c \"import sys; lines=sys.stdin.read().splitlines();"
    " print('\\n'.join(lines[1:]))\""
)
FAIL_CMD = f"{sys.executable} -c \"import sys; sys.stderr.write('boom\\n'); sys.exit(3)\""
SLEEP_CMD = f"{sys.executable} -c \"import time,sys; sys.stdin.read(); time.sleep(5)\""


class TestIdentity:
    def test_copies_input(self):
        t = IdentityTranslator()
        assert t.translate(["a b", "c"]) == ["a b", "c"]

    def test_bookkeeping(self):
        t = IdentityTranslator()
        t.translate(["a", "b"])
        t.translate(["c"])
        assert t.calls == [2, 1]
        assert t.lines_translated == 3


class TestDictionary:
    def test_token_mapping_with_passthrough(self):
        t = DictionaryTranslator({"hund": "dog", "katze": "cat"})
        assert t.translate(["hund katze", "hund x"]) == ["dog cat", "dog x"]

    def test_inverted(self):
        t = DictionaryTranslator({"hund": "dog"})
        assert t.inverted().translate(["dog"]) == ["hund"]

    def test_inverted_first_wins_on_collision(self):
        t = DictionaryTranslator({"a": "x", "b": "x"})
        assert t.inverted().mapping == {"x": "a"}

    def test_empty_line(self):
        t = DictionaryTranslator({"a": "b"})
        assert t.translate([""]) == [""]


class TestNoisyDictionary:
    def test_no_noise_equals_plain_dictionary(self):
        mapping = {"a": "x", "b": "y"}
        noisy = NoisyDictionaryTranslator(mapping, rng_seed=1)
        plain = DictionaryTranslator(mapping)
        lines = ["a b", "b a a"]
        assert noisy.translate(lines) == plain.translate(lines)

    def test_copy_through_prob_one_copies_source(self):
        t = NoisyDictionaryTranslator({"a": "x"}, copy_through_prob=1.0)
        assert t.translate(["a a a"]) == ["a a a"]

    def test_drop_prob_one_empties_lines(self):
        t = NoisyDictionaryTranslator({"a": "x"}, drop_prob=1.0)
        assert t.translate(["a a", "a"]) == ["", ""]

    def test_seeded_reproducibility(self):
        lines = ["a b c d e"] * 20
        out1 = NoisyDictionaryTranslator(
            {"a": "x"}, copy_through_prob=0.3, drop_prob=0.2, swap_prob=0.4,
            rng_seed=42).translate(lines)
        out2 = NoisyDictionaryTranslator(
            {"a": "x"}, copy_through_prob=0.3, drop_prob=0.2, swap_prob=0.4,
            rng_seed=42).translate(lines)
        out3 = NoisyDictionaryTranslator(
            {"a": "x"}, copy_through_prob=0.3, drop_prob=0.2, swap_prob=0.4,
            rng_seed=43).translate(lines)
        assert out1 == out2
        assert out1 != out3

    def test_swap_reorders_locally(self):
        t = NoisyDictionaryTranslator({}, swap_prob=1.0, rng_seed=0)
        out = t.translate(["1 2 3"])[0].split()
        assert sorted(out) == ["1", "2", "3"]
        assert out != ["1", "2", "3"]

    def test_inverted_keeps_noise_parameters(self):
        t = NoisyDictionaryTranslator(
            {"a": "x"}, copy_through_prob=0.5, drop_prob=0.25, swap_prob=0.1,
            rng_seed=7)
        inv = t.inverted()
        assert isinstance(inv, NoisyDictionaryTranslator)
        assert inv.mapping == {"x": "a"}
        assert (inv.copy_through_prob, inv.drop_prob, inv.swap_prob, inv.rng_seed) == (
            0.5, 0.25, 0.1, 7)

    @pytest.mark.parametrize("kwargs", [
        {"copy_through_prob": 1.2},
        {"drop_prob": -0.1},
        {"swap_prob": 2.0},
    ])
    def test_probability_validation(self, kwargs):
        with pytest.raises(ValueError):
            NoisyDictionaryTranslator({}, **kwargs)


class TestExternalProcess:
    def test_round_trip_order_preserved(self):
        t = ExternalProcessTranslator(UPPER_CMD)
        assert t.translate(["ab c", "d", "e f"]) == ["AB C", "D", "E F"]

    def test_nonzero_exit_raises_with_diagnostics(self):
        t = ExternalProcessTranslator(FAIL_CMD)
        with pytest.raises(TranslatorError, match="code 3") as info:
            t.translate(["x"])
        assert "boom" in info.value.diagnostics

    def test_line_count_mismatch_raises(self):
        t = ExternalProcessTranslator(DROP_LINE_CMD)
        with pytest.raises(TranslatorError, match="lines"):
            t.translate(["a", "b", "c"])

    def test_timeout(self):
        t = ExternalProcessTranslator(SLEEP_CMD, timeout_secs=0.5)
        with pytest.raises(TranslatorError, match="timed out"):
            t.translate(["x"])

    def test_missing_binary(self):
        t = ExternalProcessTranslator("definitely-not-a-real-binary-xyz")
        with pytest.raises(TranslatorError, match="failed to run"):
            t.translate(["x"])

    def test_empty_command_rejected(self):
        with pytest.raises(ValueError):
            ExternalProcessTranslator("")

    def test_empty_input(self):
        t = ExternalProcessTranslator(UPPER_CMD)
        assert t.translate([]) == []


class TestSpecAndFactory:
    def test_kind_validation(self):
        with pytest.raises(ValueError):
            TranslatorSpec(kind="telepathy")

    def test_external_requires_command(self):
        with pytest.raises(ValueError):
            TranslatorSpec(kind="external_process")

    def test_dictionary_requires_path(self):
        with pytest.raises(ValueError):
            TranslatorSpec(kind="dictionary")
        with pytest.raises(ValueError):
            TranslatorSpec(kind="noisy_dictionary")

    def test_probability_validation(self):
        with pytest.raises(ValueError):
            TranslatorSpec(kind="identity", drop_prob=1.5)

    def test_load_dictionary(self, tmp_path):
        path = tmp_path / "dict.tsv"
        path.write_text("hund\tdog\nkatze\tcat\n\n", encoding="utf-8")
        assert load_dictionary(str(path)) == {"hund": "dog", "katze": "cat"}

    def test_load_dictionary_rejects_bad_lines(self, tmp_path):
        path = tmp_path / "dict.tsv"
        path.write_text("hund dog\n", encoding="utf-8")
        with pytest.raises(DataError):
            load_dictionary(str(path))

    def test_factory_directions(self, tmp_path):
        path = tmp_path / "dict.tsv"
        path.write_text("hund\tdog\n", encoding="utf-8")
        spec = TranslatorSpec(kind="dictionary", dictionary_path=str(path))
        forward = make_translator(spec, "forward")
        backward = make_translator(spec, "backward")
        assert forward.translate(["hund"]) == ["dog"]
        assert backward.translate(["dog"]) == ["hund"]

    def test_factory_identity_and_seed_command(self):
        spec = TranslatorSpec(kind="identity")
        assert make_translator(spec, "forward").translate(["x"]) == ["x"]
        spec2 = TranslatorSpec(
            kind="external_process", command=UPPER_CMD, seed_command=UPPER_CMD)
        fwd = make_translator(spec2, "forward")
        assert isinstance(fwd, ExternalProcessTranslator)

    def test_factory_rejects_unknown_direction(self):
        with pytest.raises(ValueError):
            make_translator(TranslatorSpec(kind="identity"), "sideways")
