"""Token vocabulary: special ids, visual-token range, and text-token range.

The whole artifact runs on a single integer vocabulary. Images are discrete
visual tokens drawn from a reserved contiguous range, so one sequence model
covers text, image, and interleaved inputs. Two reserved control tokens
(AUGMENT, EMBED) encode the routing decision at generation time.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidConfig


@dataclass(frozen=True)
class Vocabulary:
    """Integer vocabulary layout.

    ``visual_range`` is a half-open interval [lo, hi) of visual token ids.
    Everything that is neither special nor visual counts as a text token.
    """

    size: int
    pad: int = 0
    eos: int = 1
    sep: int = 2
    augment: int = 3
    embed: int = 4
    visual_range: tuple[int, int] = (5, 5 + 96)

    def __post_init__(self):
        if self.size <= 0:
            raise InvalidConfig(f"vocab size must be positive, got {self.size}")
        specials = self.special_ids()
        if len(set(specials)) != len(specials):
            raise InvalidConfig(f"special token ids must be distinct: {specials}")
        lo, hi = self.visual_range
        if not (0 <= lo <= hi <= self.size):
            raise InvalidConfig(f"visual_range {self.visual_range} outside vocab of size {self.size}")
        for sid in specials:
            if not 0 <= sid < self.size:
                raise InvalidConfig(f"special id {sid} outside vocab of size {self.size}")
            if lo <= sid < hi:
                raise InvalidConfig(f"special id {sid} falls inside visual_range {self.visual_range}")
        if self.text_size <= 0:
            raise InvalidConfig("vocabulary leaves no room for text tokens")

    def special_ids(self) -> tuple[int, ...]:
        return (self.pad, self.eos, self.sep, self.augment, self.embed)

    def control_ids(self) -> tuple[int, int]:
        """The two routing control tokens."""
        return (self.augment, self.embed)

    def is_visual(self, tok: int) -> bool:
        lo, hi = self.visual_range
        return lo <= tok < hi

    def is_text(self, tok: int) -> bool:
        return 0 <= tok < self.size and not self.is_visual(tok) and tok not in self.special_ids()

    @property
    def visual_size(self) -> int:
        lo, hi = self.visual_range
        return hi - lo

    @property
    def text_size(self) -> int:
        return self.size - self.visual_size - len(self.special_ids())

    def text_ids(self) -> list[int]:
        """All text token ids in increasing order."""
        return [t for t in range(self.size) if self.is_text(t)]

    def validate_tokens(self, tokens, *, what: str = "token"):
        """Raise if any id falls outside the vocabulary."""
        from .errors import TokenOutOfRange

        for tok in tokens:
            if not 0 <= int(tok) < self.size:
                raise TokenOutOfRange(f"{what} id {tok} outside vocab of size {self.size}")

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "pad": self.pad,
            "eos": self.eos,
            "sep": self.sep,
            "augment": self.augment,
            "embed": self.embed,
            "visual_range": list(self.visual_range),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Vocabulary":
        return cls(
            size=int(d["size"]),
            pad=int(d["pad"]),
            eos=int(d["eos"]),
            sep=int(d["sep"]),
            augment=int(d["augment"]),
            embed=int(d["embed"]),
            visual_range=(int(d["visual_range"][0]), int(d["visual_range"][1])),
        )
