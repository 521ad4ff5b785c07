"""Pluggable line-oriented translators.

The wire protocol for a real MT system is deliberately minimal: one input
sentence per line on stdin, exactly one translation per line on stdout,
order preserved, UTF-8 both ways. Three mock translators ship in-tree so
the selection pipelines can be exercised hermetically: an identity copy,
a word-for-word dictionary, and a noisy dictionary that models the
degradations machine-generated text exhibits (untranslated copy-through,
dropped words, local reorderings).
"""

from __future__ import annotations

import abc
import shlex
import subprocess
from collections.abc import Sequence
from dataclasses import dataclass
from random import Random

from .errors import DataError, TranslatorError

TRANSLATOR_KINDS = ("identity", "dictionary", "noisy_dictionary", "external_process")


class Translator(abc.ABC):
    """Order-preserving batch translator.

    ``calls`` records the number of lines sent on each invocation, so a
    pipeline can prove how much text actually went through translation.
    """

    def __init__(self):
        self.calls: list[int] = []

    @property
    def lines_translated(self) -> int:
        return sum(self.calls)

    def translate(self, lines: Sequence[str]) -> list[str]:
        lines = list(lines)
        out = self._translate(lines)
        if len(out) != len(lines):
            raise TranslatorError(
                f"translator returned {len(out)} lines for {len(lines)} inputs"
            )
        self.calls.append(len(lines))
        return out

    @abc.abstractmethod
    def _translate(self, lines: list[str]) -> list[str]: ...


class IdentityTranslator(Translator):
    """Copies input to output; collapses both pipeline modes onto the
    same corpus, which makes them directly comparable in tests."""

    def _translate(self, lines):
        return list(lines)


class DictionaryTranslator(Translator):
    """Token-by-token mapping; tokens missing from the dictionary pass
    through unchanged."""

    def __init__(self, mapping: dict[str, str]):
        super().__init__()
        self.mapping = dict(mapping)

    def inverted(self) -> "DictionaryTranslator":
        """Translator for the opposite direction. On non-injective
        mappings the first source wins."""
        inverse: dict[str, str] = {}
        for src, trg in self.mapping.items():
            inverse.setdefault(trg, src)
        return DictionaryTranslator(inverse)

    def _translate_tokens(self, tokens: list[str]) -> list[str]:
        get = self.mapping.get
        return [get(t, t) for t in tokens]

    def _translate(self, lines):
        return [" ".join(self._translate_tokens(line.split())) for line in lines]


class NoisyDictionaryTranslator(DictionaryTranslator):
    """Dictionary translation with seeded, reproducible noise.

    Per token: with ``drop_prob`` the token vanishes from the output;
    otherwise, with ``copy_through_prob`` the source token is emitted
    untranslated. After the token pass, each adjacent pair is swapped
    with ``swap_prob``.
    """

    def __init__(
        self,
        mapping: dict[str, str],
        copy_through_prob: float = 0.0,
        drop_prob: float = 0.0,
        swap_prob: float = 0.0,
        rng_seed: int = 0,
    ):
        super().__init__(mapping)
        for name, p in (
            ("copy_through_prob", copy_through_prob),
            ("drop_prob", drop_prob),
            ("swap_prob", swap_prob),
        ):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")
        self.copy_through_prob = copy_through_prob
        self.drop_prob = drop_prob
        self.swap_prob = swap_prob
        self.rng_seed = rng_seed
        self.rng = Random(rng_seed)

    def inverted(self) -> "NoisyDictionaryTranslator":
        inverse: dict[str, str] = {}
        for src, trg in self.mapping.items():
            inverse.setdefault(trg, src)
        return NoisyDictionaryTranslator(
            inverse,
            copy_through_prob=self.copy_through_prob,
            drop_prob=self.drop_prob,
            swap_prob=self.swap_prob,
            rng_seed=self.rng_seed,
        )

    def _translate_tokens(self, tokens):
        rng = self.rng
        out = []
        for tok in tokens:
            if self.drop_prob and rng.random() < self.drop_prob:
                continue
            if self.copy_through_prob and rng.random() < self.copy_through_prob:
                out.append(tok)
            else:
                out.append(self.mapping.get(tok, tok))
        if self.swap_prob:
            for i in range(len(out) - 1):
                if rng.random() < self.swap_prob:
                    out[i], out[i + 1] = out[i + 1], out[i]
        return out


class ExternalProcessTranslator(Translator):
    """Runs an external command speaking the line protocol on stdin/stdout.

    Nonzero exit, timeout, or a line-count mismatch raise TranslatorError
    with whatever the process wrote to stderr attached.
    """

    def __init__(self, command: str | Sequence[str], timeout_secs: float | None = None):
        super().__init__()
        self.argv = shlex.split(command) if isinstance(command, str) else list(command)
        if not self.argv:
            raise ValueError("external translator command is empty")
        self.timeout_secs = timeout_secs

    def _translate(self, lines):
        payload = "".join(line + "\n" for line in lines)
        try:
            proc = subprocess.run(
                self.argv,
                input=payload.encode("utf-8"),
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                timeout=self.timeout_secs,
            )
        except subprocess.TimeoutExpired as exc:
            raise TranslatorError(
                f"translator {self.argv[0]!r} timed out after {self.timeout_secs}s",
                diagnostics=(exc.stderr or b"").decode("utf-8", "replace"),
            ) from exc
        except OSError as exc:
            raise TranslatorError(
                f"failed to run translator {self.argv[0]!r}: {exc}"
            ) from exc
        stderr = proc.stderr.decode("utf-8", "replace")
        if proc.returncode != 0:
            raise TranslatorError(
                f"translator {self.argv[0]!r} exited with code {proc.returncode}",
                diagnostics=stderr,
            )
        text = proc.stdout.decode("utf-8")
        out = text.split("\n")
        if out and out[-1] == "":
            out.pop()
        if len(out) != len(lines):
            raise TranslatorError(
                f"translator {self.argv[0]!r} returned {len(out)} lines "
                f"for {len(lines)} inputs",
                diagnostics=stderr,
            )
        return out


@dataclass(frozen=True)
class TranslatorSpec:
    """Declarative translator choice, as configured from the CLI.

    ``command`` drives back-translation (target -> source); for online
    seed production (source -> target) an external translator may name a
    separate ``seed_command``, defaulting to ``command``. Dictionary files
    map source tokens to target tokens; the back-translation direction
    uses the inverted mapping.
    """

    kind: str
    command: str | None = None
    seed_command: str | None = None
    dictionary_path: str | None = None
    copy_through_prob: float = 0.0
    drop_prob: float = 0.0
    swap_prob: float = 0.0
    rng_seed: int = 0
    timeout_secs: float | None = None

    def __post_init__(self):
        if self.kind not in TRANSLATOR_KINDS:
            raise ValueError(f"unknown translator kind: {self.kind!r}")
        if self.kind == "external_process" and not self.command:
            raise ValueError("external_process translator requires a command")
        if self.kind in ("dictionary", "noisy_dictionary") and not self.dictionary_path:
            raise ValueError(f"{self.kind} translator requires a dictionary file")
        for name in ("copy_through_prob", "drop_prob", "swap_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")


def load_dictionary(path: str) -> dict[str, str]:
    """Load a token dictionary: one ``source<TAB>target`` entry per line."""
    mapping: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.count("\t") != 1:
                raise DataError(
                    f"{path}:{lineno}: dictionary line must contain exactly one TAB"
                )
            src, trg = line.split("\t")
            mapping[src] = trg
    return mapping


def make_translator(spec: TranslatorSpec, direction: str = "backward") -> Translator:
    """Instantiate a translator from its spec.

    ``backward`` is the back-translation direction (target -> source);
    ``forward`` produces the approximated target seed (source -> target).
    """
    if direction not in ("forward", "backward"):
        raise ValueError(f"unknown translation direction: {direction!r}")
    if spec.kind == "identity":
        return IdentityTranslator()
    if spec.kind == "external_process":
        command = spec.command
        if direction == "forward" and spec.seed_command:
            command = spec.seed_command
        return ExternalProcessTranslator(command, timeout_secs=spec.timeout_secs)
    mapping = load_dictionary(spec.dictionary_path)
    if spec.kind == "dictionary":
        translator = DictionaryTranslator(mapping)
    else:
        translator = NoisyDictionaryTranslator(
            mapping,
            copy_through_prob=spec.copy_through_prob,
            drop_prob=spec.drop_prob,
            swap_prob=spec.swap_prob,
            rng_seed=spec.rng_seed,
        )
    return translator if direction == "forward" else translator.inverted()
