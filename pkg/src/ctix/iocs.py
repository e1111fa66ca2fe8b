"""Pattern-matching extraction of the 23 IOC types, plus masking utilities.

Detection runs over sanitized text that may still be defanged; the matcher
tolerates the common defanging conventions in place and reports a canonical
refanged value alongside each raw span. Overlaps between candidate matches
are resolved globally: longest match wins, then a fixed type-priority list,
then earliest start.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

from .errors import OverlappingMatchesError, RecordMismatchError
from .model import EntitySpan, IocType, SpanSource

# --------------------------------------------------------------------------
# refanging

_REFANG_STEPS = [
    (re.compile(r"\[\.\]|\(\.\)|\[dot\]", re.IGNORECASE), "."),
    (re.compile(r"\[@\]|\[at\]", re.IGNORECASE), "@"),
    (re.compile(r"\[:\]"), ":"),
    (re.compile(r"hxxp", re.IGNORECASE), "http"),
]


def refang(text: str) -> str:
    """Undo common defanging conventions; idempotent."""
    for pattern, repl in _REFANG_STEPS:
        text = pattern.sub(repl, text)
    return text


def canonical_value(ioc_type: IocType, surface: str) -> str:
    """Canonical refanged value for a raw IOC surface of a known type."""
    value = refang(surface)
    if ioc_type is IocType.CVES:
        return value.upper()
    if ioc_type is IocType.TLP_LABELS:
        return "TLP:" + re.split(r"[: -]", value, maxsplit=1)[-1].strip().upper()
    return value


# --------------------------------------------------------------------------
# patterns

_DOT = r"(?:\.|\[\.\]|\(\.\)|\[dot\])"
_AT = r"(?:@|\[@\]|\[at\])"
_OCTET = r"(?:25[0-5]|2[0-4]\d|1\d\d|[1-9]?\d)"
_LABEL = r"[A-Za-z0-9](?:[A-Za-z0-9-]{0,61}[A-Za-z0-9])?"
_B58 = r"[1-9A-HJ-NP-Za-km-z]"

_IPV4_CORE = rf"{_OCTET}(?:{_DOT}{_OCTET}){{3}}"

_DETECT_PATTERNS: dict[IocType, re.Pattern] = {
    IocType.ATTACK_TACTICS_ENTERPRISE: re.compile(r"(?<![A-Za-z0-9])TA\d{4}(?!\d)"),
    IocType.ATTACK_TECHNIQUES_ENTERPRISE: re.compile(
        r"(?<![A-Za-z0-9])T\d{4}(?:\.\d{3})?(?!\d)"
    ),
    IocType.BITCOIN_ADDRESSES: re.compile(
        rf"(?<![A-Za-z0-9])(?:[13]{_B58}{{25,34}}|bc1[02-9ac-hj-np-z]{{11,71}})(?![A-Za-z0-9])"
    ),
    IocType.CVES: re.compile(r"(?<![A-Za-z0-9])CVE-\d{4}-\d{4,7}(?!\d)", re.IGNORECASE),
    IocType.DOMAINS: re.compile(
        rf"(?<![\w.-])(?:{_LABEL}{_DOT})+[A-Za-z][A-Za-z0-9-]{{1,29}}(?![\w-])",
        re.IGNORECASE,
    ),
    IocType.EMAIL_ADDRESSES: re.compile(
        rf"(?<![\w.])[A-Za-z0-9][A-Za-z0-9._%+-]*{_AT}(?:{_LABEL}{_DOT})+"
        rf"[A-Za-z][A-Za-z0-9-]{{1,29}}(?![\w-])",
        re.IGNORECASE,
    ),
    IocType.FILE_PATHS: re.compile(
        r"""
        (?<![A-Za-z0-9])
        (?:[A-Za-z]:\\|\\\\[A-Za-z0-9._$-]+\\|%[A-Za-z_][A-Za-z0-9_]*%\\)
            [^\s<>:"|?*]+
        | ~?/(?:usr|etc|var|tmp|opt|home|bin|sbin|lib|dev|proc|srv|mnt|media|root|data|
             private|Applications|Library|System|Users)
             (?:/[^\s<>:"|?*,;']+)+
        """,
        re.VERBOSE,
    ),
    IocType.IMPHASHES: re.compile(
        r"\bimphash\b\W{0,20}?([0-9a-fA-F]{32})(?![0-9a-zA-Z])", re.IGNORECASE
    ),
    IocType.IPV4S: re.compile(
        rf"(?<![\d.]){_IPV4_CORE}(?!{_DOT}?\d)",
    ),
    IocType.IPV4_CIDRS: re.compile(
        rf"(?<![\d.]){_IPV4_CORE}/(?:3[0-2]|[12]?\d)(?!\d)",
    ),
    IocType.MAC_ADDRESSES: re.compile(
        r"(?<![A-Fa-f0-9:-])[0-9A-Fa-f]{2}([:-])(?:[0-9A-Fa-f]{2}\1){4}[0-9A-Fa-f]{2}(?![A-Fa-f0-9:-])"
    ),
    IocType.MD5S: re.compile(r"(?<![a-zA-Z0-9])[0-9a-fA-F]{32}(?![a-zA-Z0-9])"),
    IocType.MONERO_ADDRESSES: re.compile(
        rf"(?<![A-Za-z0-9])[48]{_B58}{{94}}(?![A-Za-z0-9])"
    ),
    IocType.REGISTRY_KEY_PATHS: re.compile(
        r"\b(?:HKEY_LOCAL_MACHINE|HKEY_CURRENT_USER|HKEY_CLASSES_ROOT|HKEY_CURRENT_CONFIG|"
        r"HKEY_USERS|HKLM|HKCU|HKCR|HKCC|HKU)(?:\\[^\s\\<>|\"']+)+"
    ),
    IocType.SHA1S: re.compile(r"(?<![a-zA-Z0-9])[0-9a-fA-F]{40}(?![a-zA-Z0-9])"),
    IocType.SHA256S: re.compile(r"(?<![a-zA-Z0-9])[0-9a-fA-F]{64}(?![a-zA-Z0-9])"),
    IocType.SHA512S: re.compile(r"(?<![a-zA-Z0-9])[0-9a-fA-F]{128}(?![a-zA-Z0-9])"),
    IocType.SSDEEPS: re.compile(
        r"(?<![\w:])\d{1,10}:[A-Za-z0-9/+]{3,}:[A-Za-z0-9/+]{3,}(?![A-Za-z0-9/+:])"
    ),
    IocType.TLP_LABELS: re.compile(
        r"(?<![A-Za-z0-9])TLP[: -][ ]?(?:RED|AMBER\+STRICT|AMBER|GREEN|WHITE|CLEAR)(?![A-Za-z0-9])",
        re.IGNORECASE,
    ),
    IocType.URLS: re.compile(
        r"(?<![\w.])(?:https?|hxxps?|s?ftps?)(?::|\[:\])//[^\s<>\"']+",
        re.IGNORECASE,
    ),
    IocType.USER_AGENTS: re.compile(
        r"\bUser-Agent\s*:[ \t]*(\S[^\r\n]*)|\b(Mozilla/\d+\.\d+[^\r\n\"']*)",
        re.IGNORECASE,
    ),
}

# Patterns the extracted surface itself must satisfy, used by the soundness
# checks; keyword-anchored types validate the value, not the trigger context.
SPAN_PATTERNS: dict[IocType, re.Pattern] = dict(_DETECT_PATTERNS)
SPAN_PATTERNS[IocType.IMPHASHES] = re.compile(r"[0-9a-fA-F]{32}")
SPAN_PATTERNS[IocType.USER_AGENTS] = re.compile(r"\S[^\r\n]*")
SPAN_PATTERNS[IocType.ATTACK_TACTICS_MOBILE] = SPAN_PATTERNS[
    IocType.ATTACK_TACTICS_ENTERPRISE
]
SPAN_PATTERNS[IocType.ATTACK_TECHNIQUES_MOBILE] = SPAN_PATTERNS[
    IocType.ATTACK_TECHNIQUES_ENTERPRISE
]

# Longest-match ties are broken by this order (earlier = more specific).
TYPE_PRIORITY = [
    IocType.URLS,
    IocType.EMAIL_ADDRESSES,
    IocType.IPV4_CIDRS,
    IocType.IPV4S,
    IocType.MAC_ADDRESSES,
    IocType.SHA512S,
    IocType.SHA256S,
    IocType.SHA1S,
    IocType.IMPHASHES,
    IocType.MD5S,
    IocType.SSDEEPS,
    IocType.CVES,
    IocType.ATTACK_TECHNIQUES_MOBILE,
    IocType.ATTACK_TECHNIQUES_ENTERPRISE,
    IocType.ATTACK_TACTICS_MOBILE,
    IocType.ATTACK_TACTICS_ENTERPRISE,
    IocType.TLP_LABELS,
    IocType.BITCOIN_ADDRESSES,
    IocType.MONERO_ADDRESSES,
    IocType.REGISTRY_KEY_PATHS,
    IocType.FILE_PATHS,
    IocType.USER_AGENTS,
    IocType.DOMAINS,
]
_PRIORITY_RANK = {t: i for i, t in enumerate(TYPE_PRIORITY)}

_TRAILING_TRIM = ".,;:!?'\""

_MOBILE_HINT = re.compile(r"mobile", re.IGNORECASE)


def _load_tlds() -> frozenset[str]:
    from pathlib import Path

    path = Path(__file__).parent / "data" / "tlds.txt"
    tlds = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip().lower()
        if line:
            tlds.add(line)
    return frozenset(tlds)


TLDS = _load_tlds()

_B58_ALPHABET = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz"
_B58_INDEX = {c: i for i, c in enumerate(_B58_ALPHABET)}
_BECH32_CHARSET = "qpzry9x8gf2tvdw0s3jn54khce6mua7l"


def _base58check_ok(addr: str) -> bool:
    num = 0
    for ch in addr:
        if ch not in _B58_INDEX:
            return False
        num = num * 58 + _B58_INDEX[ch]
    body = num.to_bytes((num.bit_length() + 7) // 8, "big")
    pad = len(addr) - len(addr.lstrip("1"))
    payload = b"\x00" * pad + body
    if len(payload) < 5:
        return False
    digest = hashlib.sha256(hashlib.sha256(payload[:-4]).digest()).digest()
    return digest[:4] == payload[-4:]


def _bech32_polymod(values: list[int]) -> int:
    gens = (0x3B6A57B2, 0x26508E6D, 0x1EA119FA, 0x3D4233DD, 0x2A1462B3)
    chk = 1
    for v in values:
        top = chk >> 25
        chk = (chk & 0x1FFFFFF) << 5 ^ v
        for i in range(5):
            chk ^= gens[i] if ((top >> i) & 1) else 0
    return chk


def _bech32_ok(addr: str) -> bool:
    addr = addr.lower()
    hrp, _, data = addr.rpartition("1")
    if not hrp or any(c not in _BECH32_CHARSET for c in data):
        return False
    values = [ord(c) >> 5 for c in hrp] + [0] + [ord(c) & 31 for c in hrp]
    values += [_BECH32_CHARSET.index(c) for c in data]
    # 1 is classic bech32, 0x2bc830a3 is bech32m
    return _bech32_polymod(values) in (1, 0x2BC830A3)


@dataclass(frozen=True)
class IocMatch:
    """One extracted indicator: its raw span plus the canonical value."""

    span: EntitySpan
    refanged_value: str

    @property
    def label(self) -> IocType:
        return IocType(self.span.label)


@dataclass(frozen=True)
class MaskRecord:
    """Bookkeeping for one placeholder substitution, enough to invert it."""

    placeholder: str
    original: str
    masked_start: int
    masked_end: int
    original_start: int
    original_end: int


def _domain_ok(refanged: str) -> bool:
    parts = refanged.lower().split(".")
    return len(parts) >= 2 and parts[-1] in TLDS


def _trim_trailing(text: str, start: int, end: int) -> int:
    """Shrink a match end past trailing punctuation and unbalanced closers."""
    while end > start:
        ch = text[end - 1]
        if ch in _TRAILING_TRIM:
            end -= 1
        elif ch == ")" and text.count("(", start, end) < text.count(")", start, end):
            end -= 1
        elif ch == "]" and text.count("[", start, end) < text.count("]", start, end):
            end -= 1
        elif ch == "}" and text.count("{", start, end) < text.count("}", start, end):
            end -= 1
        else:
            break
    return end


def _mobile_context(text: str, start: int) -> bool:
    lo = max(0, start - 160)
    return bool(_MOBILE_HINT.search(text, lo, min(len(text), start + 40)))


def _candidates(text: str):
    """Yield (start, end, type, refanged_value) before overlap resolution."""
    for ioc_type, pattern in _DETECT_PATTERNS.items():
        for m in pattern.finditer(text):
            start, end = m.start(), m.end()
            if ioc_type is IocType.IMPHASHES:
                start, end = m.span(1)
            elif ioc_type is IocType.USER_AGENTS:
                group = 1 if m.group(1) else 2
                start, end = m.span(group)
                while end > start and text[end - 1] in " \t'\"":
                    end -= 1
            elif ioc_type in (IocType.URLS, IocType.FILE_PATHS, IocType.REGISTRY_KEY_PATHS):
                end = _trim_trailing(text, start, end)
            if end <= start:
                continue
            surface = text[start:end]
            value = refang(surface)
            if ioc_type is IocType.DOMAINS and not _domain_ok(value):
                continue
            if ioc_type is IocType.EMAIL_ADDRESSES and not _domain_ok(value.split("@")[-1]):
                continue
            if ioc_type is IocType.BITCOIN_ADDRESSES:
                if value.lower().startswith("bc1"):
                    if not _bech32_ok(value):
                        continue
                elif not _base58check_ok(value):
                    continue
            if ioc_type is IocType.SSDEEPS and not any(
                c.isalpha() for c in value.split(":", 1)[1]
            ):
                continue
            value = canonical_value(ioc_type, surface)
            if ioc_type in (
                IocType.ATTACK_TACTICS_ENTERPRISE,
                IocType.ATTACK_TECHNIQUES_ENTERPRISE,
            ) and _mobile_context(text, start):
                ioc_type = (
                    IocType.ATTACK_TACTICS_MOBILE
                    if ioc_type is IocType.ATTACK_TACTICS_ENTERPRISE
                    else IocType.ATTACK_TECHNIQUES_MOBILE
                )
            yield start, end, ioc_type, value


def find_iocs(text: str) -> list[IocMatch]:
    """Extract all IOCs from sanitized text.

    Returns non-overlapping matches sorted by start offset. Conflicts are
    resolved longest-match-first, then by TYPE_PRIORITY, then by position.
    """
    seen = set()
    candidates = []
    for start, end, ioc_type, value in _candidates(text):
        key = (start, end, ioc_type)
        if key not in seen:
            seen.add(key)
            candidates.append((start, end, ioc_type, value))
    candidates.sort(key=lambda c: (-(c[1] - c[0]), _PRIORITY_RANK[c[2]], c[0]))
    kept: list[tuple[int, int, IocType, str]] = []
    for cand in candidates:
        if all(cand[1] <= k[0] or cand[0] >= k[1] for k in kept):
            kept.append(cand)
    kept.sort(key=lambda c: c[0])
    return [
        IocMatch(
            span=EntitySpan(
                text=text[start:end],
                start=start,
                end=end,
                label=ioc_type,
                confidence=1.0,
                source=SpanSource.IOC_FINDER,
            ),
            refanged_value=value,
        )
        for start, end, ioc_type, value in kept
    ]


# --------------------------------------------------------------------------
# masking

def mask(text: str, matches: list[IocMatch]) -> tuple[str, list[MaskRecord]]:
    """Replace each match with its type placeholder; records invert exactly."""
    ordered = sorted(matches, key=lambda m: m.span.start)
    for a, b in zip(ordered, ordered[1:]):
        if b.span.start < a.span.end:
            raise OverlappingMatchesError(
                f"matches at {a.span.key} and {b.span.key} overlap"
            )
    out: list[str] = []
    pos = 0
    cursor = 0
    records: list[MaskRecord] = []
    for m in ordered:
        placeholder = m.label.placeholder
        out.append(text[cursor : m.span.start])
        pos += m.span.start - cursor
        records.append(
            MaskRecord(
                placeholder=placeholder,
                original=m.span.text,
                masked_start=pos,
                masked_end=pos + len(placeholder),
                original_start=m.span.start,
                original_end=m.span.end,
            )
        )
        out.append(placeholder)
        pos += len(placeholder)
        cursor = m.span.end
    out.append(text[cursor:])
    return "".join(out), records


def unmask(masked_text: str, records: list[MaskRecord]) -> str:
    """Exact inverse of mask() given its records."""
    out: list[str] = []
    cursor = 0
    for r in sorted(records, key=lambda r: r.masked_start):
        if masked_text[r.masked_start : r.masked_end] != r.placeholder:
            raise RecordMismatchError(
                f"expected {r.placeholder!r} at [{r.masked_start}, {r.masked_end})"
            )
        out.append(masked_text[cursor : r.masked_start])
        out.append(r.original)
        cursor = r.masked_end
    out.append(masked_text[cursor:])
    return "".join(out)


_PLACEHOLDER_RE = re.compile(r"INDICATOR_[A-Z0-9_]+")


def ner_segments(masked_text: str) -> list[tuple[int, int]]:
    """Character ranges of masked text that should reach the NER chunker.

    Runs of 3+ consecutive lines that consist only of IOC placeholders and
    separators (no prose) are table-like artifacts: their indicators are
    already extracted, so the lines are excluded from chunking.
    """
    lines = []
    pos = 0
    for line in masked_text.split("\n"):
        end = pos + len(line)
        stripped = _PLACEHOLDER_RE.sub("", line)
        table_like = bool(_PLACEHOLDER_RE.search(line)) and not re.search(r"\w", stripped)
        lines.append((pos, end, table_like))
        pos = end + 1

    excluded = [False] * len(lines)
    i = 0
    while i < len(lines):
        if lines[i][2]:
            j = i
            while j < len(lines) and lines[j][2]:
                j += 1
            if j - i >= 3:
                for k in range(i, j):
                    excluded[k] = True
            i = j
        else:
            i += 1

    segments: list[tuple[int, int]] = []
    for (start, end, _), skip in zip(lines, excluded):
        if skip:
            continue
        if segments and segments[-1][1] + 1 == start:
            segments[-1] = (segments[-1][0], end)
        else:
            segments.append((start, end))
    return [(s, e) for s, e in segments if e > s]


def masked_to_original_pos(records: list[MaskRecord], pos: int) -> int:
    """Translate a masked-text offset that is not inside a placeholder."""
    delta = 0
    for r in records:
        if r.masked_end <= pos:
            delta += (r.original_end - r.original_start) - (r.masked_end - r.masked_start)
        elif r.masked_start < pos < r.masked_end:
            raise ValueError(f"offset {pos} is inside placeholder {r.placeholder}")
    return pos + delta


def masked_to_original_span(
    records: list[MaskRecord], start: int, end: int
) -> tuple[int, int] | None:
    """Translate a masked-text span; None when it touches a placeholder."""
    for r in records:
        if start < r.masked_end and r.masked_start < end:
            return None
    return masked_to_original_pos(records, start), masked_to_original_pos(records, end)
