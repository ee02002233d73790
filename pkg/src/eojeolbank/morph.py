"""The concatenative morpheme layer: ``프랑스/NNP+의/JKG``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import EmptyField, MalformedSegment

_HANGUL_BASE = 0xAC00
_HANGUL_LAST = 0xD7A3

# compatibility jamo -> index of the same consonant as a syllable-final
_FINAL_INDEX = {
    "ㄱ": 1, "ㄲ": 2, "ㄳ": 3, "ㄴ": 4, "ㄵ": 5, "ㄶ": 6, "ㄷ": 7, "ㄹ": 8,
    "ㄺ": 9, "ㄻ": 10, "ㄼ": 11, "ㄽ": 12, "ㄾ": 13, "ㄿ": 14, "ㅀ": 15,
    "ㅁ": 16, "ㅂ": 17, "ㅄ": 18, "ㅅ": 19, "ㅆ": 20, "ㅇ": 21, "ㅈ": 22,
    "ㅊ": 23, "ㅋ": 24, "ㅌ": 25, "ㅍ": 26, "ㅎ": 27,
}


@dataclass(frozen=True)
class MorphSeg:
    """Ordered (form, xpos) pairs for one eojeol."""

    morphs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        morphs = tuple((str(f), str(t)) for f, t in self.morphs)
        if not morphs:
            raise EmptyField("a segmentation needs at least one morpheme")
        for form, tag in morphs:
            if not form or not tag:
                raise EmptyField(f"empty form or tag in {form!r}/{tag!r}")
        object.__setattr__(self, "morphs", morphs)

    @property
    def forms(self) -> tuple[str, ...]:
        return tuple(f for f, _ in self.morphs)

    @property
    def xpos(self) -> tuple[str, ...]:
        return tuple(t for _, t in self.morphs)

    def mapped_xpos(self, tag_map: Mapping[str, str] | None = None) -> tuple[str, ...]:
        if not tag_map:
            return self.xpos
        return tuple(tag_map.get(t, t) for t in self.xpos)

    def joined_forms(self) -> str:
        return join_forms(self.forms)

    def __add__(self, other: "MorphSeg") -> "MorphSeg":
        return MorphSeg(self.morphs + other.morphs)

    def __len__(self) -> int:
        return len(self.morphs)

    def __str__(self) -> str:
        return "+".join(f"{f}/{t}" for f, t in self.morphs)


def parse_morphseg(text: str) -> MorphSeg:
    """Parse ``form/TAG+form/TAG``.

    Each segment is split at its last ``/`` so forms may contain slashes.
    An empty piece produced by ``++`` stands for a literal ``+`` form.
    """
    if not text:
        raise EmptyField("empty segmentation string")
    pieces = text.split("+")
    segments: list[str] = []
    i = 0
    while i < len(pieces):
        piece = pieces[i]
        if piece == "" and i + 1 < len(pieces) and pieces[i + 1].startswith("/"):
            piece = "+" + pieces[i + 1]
            i += 1
        segments.append(piece)
        i += 1
    morphs = []
    for seg in segments:
        if "/" not in seg:
            raise MalformedSegment(f"segment {seg!r} of {text!r} has no '/'")
        form, _, tag = seg.rpartition("/")
        if not form or not tag:
            raise EmptyField(f"segment {seg!r} of {text!r} has an empty field")
        morphs.append((form, tag))
    return MorphSeg(tuple(morphs))


def looks_like_morphseg(text: str) -> bool:
    try:
        parse_morphseg(text)
    except (MalformedSegment, EmptyField):
        return False
    return True


def _is_syllable(ch: str) -> bool:
    return _HANGUL_BASE <= ord(ch) <= _HANGUL_LAST


def join_forms(forms: Iterable[str]) -> str:
    """Concatenate morph forms, folding a bare final consonant into the
    preceding open syllable (세계적이 + ㄴ -> 세계적인). No other
    allomorphy is undone."""
    out = ""
    for form in forms:
        if out and form and form[0] in _FINAL_INDEX and _is_syllable(out[-1]):
            code = ord(out[-1]) - _HANGUL_BASE
            if code % 28 == 0:
                out = out[:-1] + chr(ord(out[-1]) + _FINAL_INDEX[form[0]]) + form[1:]
                continue
        out += form
    return out


def initial_consonant(ch: str) -> int | None:
    """Index of the initial consonant of a precomposed syllable."""
    if not _is_syllable(ch):
        return None
    return (ord(ch) - _HANGUL_BASE) // 588


def same_onset(a: str, b: str) -> bool:
    """Loose identity check between two eojeol spellings of the same word.

    Contraction can change the first syllable (하+었 -> 했) but keeps its
    initial consonant.
    """
    if not a or not b:
        return a == b
    if a[0] == b[0]:
        return True
    ia, ib = initial_consonant(a[0]), initial_consonant(b[0])
    return ia is not None and ia == ib
