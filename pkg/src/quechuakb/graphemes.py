"""Language profiles, text normalization and grapheme tokenization."""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path

from .errors import ParseError, UnknownNameError, ValidationError

BUILTIN_PROFILES = ("quechua", "spanish", "english")

# Consonants that take the glottal-stop apostrophe as an ejective marker.
EJECTIVE_BASES = ("ch", "k", "p", "q", "t")


class TokenMode(str, Enum):
    CHAR = "char"
    GRAPHEME = "grapheme"


@dataclass(frozen=True)
class LanguageProfile:
    """Alphabet and multigraph inventory for one language.

    ``fuse_ejectives`` is off by default: the apostrophe stays a standalone
    unit so counts line up with per-character frequency tables.
    """

    name: str
    alphabet: tuple[str, ...]
    multigraphs: frozenset[str]
    treat_apostrophe_as_letter: bool = False
    normalization: str = "nfc"
    fuse_ejectives: bool = False

    def __post_init__(self):
        if not self.alphabet:
            raise ValidationError("alphabet must not be empty", field="alphabet")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValidationError("alphabet contains duplicates", field="alphabet")
        for g in self.alphabet:
            if not g or g.strip() != g:
                raise ValidationError(f"invalid alphabet entry {g!r}", field="alphabet")
            if g.casefold() != g:
                raise ValidationError(f"alphabet entry {g!r} is not lowercase", field="alphabet")
        missing = sorted(m for m in self.multigraphs if m not in self.alphabet)
        if missing:
            raise ValidationError(
                f"multigraphs not in alphabet: {', '.join(missing)}", field="multigraphs"
            )
        short = sorted(m for m in self.multigraphs if len(m) < 2)
        if short:
            raise ValidationError(f"multigraphs shorter than 2: {short}", field="multigraphs")
        if self.normalization != "nfc":
            raise ValidationError(
                f"unsupported normalization {self.normalization!r}", field="normalization"
            )

    @property
    def units(self) -> frozenset[str]:
        """Single-character units spelled by the alphabet (char-mode coverage set)."""
        return frozenset(c for g in self.alphabet for c in g)

    @property
    def inventory(self) -> frozenset[str]:
        """Multigraphs used by the grapheme-mode tokenizer."""
        if not self.fuse_ejectives:
            return self.multigraphs
        return self.multigraphs | {b + "'" for b in EJECTIVE_BASES}

    def to_dict(self) -> dict:
        doc = {
            "name": self.name,
            "alphabet": list(self.alphabet),
            "multigraphs": sorted(self.multigraphs),
            "apostrophe_is_letter": self.treat_apostrophe_as_letter,
        }
        if self.fuse_ejectives:
            doc["fuse_ejectives"] = True
        return doc


def _profile_from_dict(doc) -> LanguageProfile:
    if not isinstance(doc, dict):
        raise ParseError("profile document must be a JSON object")
    for field in ("name", "alphabet", "multigraphs", "apostrophe_is_letter"):
        if field not in doc:
            raise ParseError(f"profile is missing field {field!r}")
    if not isinstance(doc["name"], str):
        raise ParseError("field 'name' must be a string")
    for field in ("alphabet", "multigraphs"):
        value = doc[field]
        if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
            raise ParseError(f"field {field!r} must be an array of strings")
    if len(set(doc["multigraphs"])) != len(doc["multigraphs"]):
        raise ValidationError("multigraphs contain duplicates", field="multigraphs")
    if not isinstance(doc["apostrophe_is_letter"], bool):
        raise ParseError("field 'apostrophe_is_letter' must be a boolean")
    return LanguageProfile(
        name=doc["name"],
        alphabet=tuple(unicodedata.normalize("NFC", g) for g in doc["alphabet"]),
        multigraphs=frozenset(unicodedata.normalize("NFC", g) for g in doc["multigraphs"]),
        treat_apostrophe_as_letter=doc["apostrophe_is_letter"],
        fuse_ejectives=bool(doc.get("fuse_ejectives", False)),
    )


def load_profile(source) -> LanguageProfile:
    """Build a validated profile from a JSON string, a parsed dict, or a path."""
    if isinstance(source, dict):
        return _profile_from_dict(source)
    if isinstance(source, Path):
        source = source.read_text(encoding="utf-8")
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed profile document: {exc}") from exc
    return _profile_from_dict(doc)


def builtin_profile(name: str) -> LanguageProfile:
    if name not in BUILTIN_PROFILES:
        raise UnknownNameError(f"unknown profile {name!r}; expected one of {BUILTIN_PROFILES}")
    text = resources.files(__package__).joinpath(f"profiles/{name}.json").read_text("utf-8")
    return load_profile(text)


def resolve_profile(name_or_path: str) -> LanguageProfile:
    if name_or_path in BUILTIN_PROFILES:
        return builtin_profile(name_or_path)
    return load_profile(Path(name_or_path))


def normalize(text: str) -> str:
    """NFC-normalize, then lowercase alphabetic characters only.

    Non-alphabetic characters (digits, punctuation, whitespace, apostrophes)
    pass through unchanged.
    """
    text = unicodedata.normalize("NFC", text)
    out = "".join(c.lower() if c.isalpha() else c for c in text)
    # Lowercasing can in rare cases produce decomposed output (e.g. U+0130).
    return unicodedata.normalize("NFC", out)


def tokenize(text: str, profile: LanguageProfile, mode=TokenMode.GRAPHEME) -> list[str]:
    """Split normalized text into counting units.

    Grapheme mode is greedy longest-match over the profile's multigraph
    inventory; characters outside the alphabet are emitted as-is.
    """
    mode = TokenMode(mode)
    if mode is TokenMode.CHAR:
        return list(text)
    inventory = profile.inventory
    lengths = sorted({len(m) for m in inventory}, reverse=True)
    tokens = []
    i, n = 0, len(text)
    while i < n:
        for k in lengths:
            if i + k <= n and text[i:i + k] in inventory:
                tokens.append(text[i:i + k])
                i += k
                break
        else:
            tokens.append(text[i])
            i += 1
    return tokens
