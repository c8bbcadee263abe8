"""The catalog of Euler's theorems, notes and scholia as machine-readable records.

Each record keeps the payload exactly as printed and, where recomputation
disagrees with the print, a corrected payload beside it. Loading never
normalizes printed text; the verifier in ``validators`` judges both.
"""

import json
import logging
import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import CatalogError, ErrorCode, UsageError
from .forms import Sign


logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

_ITEM_RE = re.compile(r'^(\d+)([a-z]?)([+\-±])(\d+)$')
_ID_RE = re.compile(r'^(Th|Note|Scholion) (\d+)( Cor)?$')
_ID_ORDER = {'Th': 0, 'Note': 1, 'Scholion': 2}


class ClaimKind(str, Enum):
    DIVISOR_CLASSES = 'divisor-classes'
    FORBIDDEN_CLASSES = 'forbidden-classes'
    REPRESENTATION = 'representation'
    MULTIPLIER = 'multiplier'
    SPLIT = 'split'
    REDUCTION = 'reduction'
    NONSQUARE_FAMILY = 'nonsquare-family'
    CHARACTER_TABLE = 'character-table'
    COUNT_TABLE = 'count-table'
    INCLUSION = 'inclusion'


class Group(BaseModel):
    """A column of classes with what the record claims about its primes."""
    model_config = ConfigDict(extra='forbid')

    classes: List[str]
    forms: Optional[List[str]] = None
    multipliers: Optional[List[int]] = None
    image_group: Optional[int] = None


class TableRow(BaseModel):
    """One prime of a character table: residues of N giving +P and -P."""
    model_config = ConfigDict(extra='forbid')

    prime: int
    plus: List[str]
    minus: List[str]


class CountRow(BaseModel):
    """One row of the class-count table, e.g. N=2pq -> 2(p-1)(q-1)."""
    model_config = ConfigDict(extra='forbid')

    shape: str
    count: str

    def render(self) -> str:
        return f"{self.shape} → {self.count}"


class Payload(BaseModel):
    """Everything a record can claim. Absent fields are not checked."""
    model_config = ConfigDict(extra='forbid')

    primes: Optional[List[int]] = None
    classes: Optional[List[str]] = None
    reduced: Optional[List[str]] = None
    forms: Optional[List[str]] = None
    represented: Optional[bool] = None
    converse: Optional[bool] = None
    groups: Optional[List[Group]] = None
    rows: Optional[List[TableRow]] = None
    counts: Optional[List[CountRow]] = None
    families: Optional[List[str]] = None
    residues: Optional[List[str]] = None
    reducible: Optional[bool] = None
    count: Optional[int] = None
    pairs: Optional[int] = None

    def present(self) -> List[str]:
        return [name for name, value in self if value is not None]


class CatalogRecord(BaseModel):
    """One theorem, note, corollary or scholion."""
    model_config = ConfigDict(extra='forbid')

    id: str
    kind: ClaimKind
    n: Optional[int] = Field(default=None, ge=1)
    sign: Optional[Sign] = None
    modulus: Optional[int] = None
    printed: Payload
    corrected: Optional[Payload] = None
    multipliers: Optional[List[int]] = None
    notes: Optional[str] = None

    @model_validator(mode='after')
    def _check_record(self) -> 'CatalogRecord':
        if not _ID_RE.match(self.id):
            raise ValueError(f"bad record id {self.id!r}")
        if self.n is not None:
            if self.sign is None:
                raise ValueError("a record with n needs a sign")
            if self.modulus is not None and self.modulus != 4 * self.n:
                raise ValueError(f"modulus {self.modulus} is not 4n for n={self.n}")
        if self.corrected is not None:
            fields = self.corrected.present()
            if not fields:
                raise ValueError("corrected payload is empty")
            for name in fields:
                if getattr(self.corrected, name) == getattr(self.printed, name):
                    raise ValueError(f"corrected field {name!r} repeats the printed value")
        return self

    @property
    def merged(self) -> Payload:
        """The printed payload with every corrected field substituted."""
        if self.corrected is None:
            return self.printed
        update = {name: getattr(self.corrected, name) for name in self.corrected.present()}
        return self.printed.model_copy(update=update)

    @property
    def sort_key(self) -> Tuple[int, int, int]:
        return record_sort_key(self.id)


@dataclass(frozen=True)
class ParsedItem:
    """
    A printed class such as "20m+3", "28m±9" or "11n+2".

    ``strict`` is False for items that are only readable leniently, like
    "12+1" (the letter is missing).
    """
    text: str
    modulus: int
    residue: int
    style: str
    strict: bool

    @property
    def residues(self) -> FrozenSet[int]:
        r = self.residue % self.modulus
        if self.style == '+':
            return frozenset({r})
        if self.style == '-':
            return frozenset({(-self.residue) % self.modulus})
        return frozenset({r, (-self.residue) % self.modulus})


def parse_item(text: str, letter: str = 'm') -> Optional[ParsedItem]:
    """Read one printed class; None when the text is not a class at all."""
    cleaned = text.strip().replace(' ', '').replace('−', '-')
    match = _ITEM_RE.match(cleaned)
    if not match:
        return None
    modulus, found, style, residue = match.groups()
    modulus = int(modulus)
    if modulus < 1 or (found and found != letter):
        return None
    return ParsedItem(text, modulus, int(residue), style, strict=bool(found))


def record_sort_key(record_id: str) -> Tuple[int, int, int]:
    """Th before Note before Scholion, numerically; a corollary follows its note."""
    match = _ID_RE.match(record_id)
    if not match:
        raise UsageError("not a record id", record_id, code=ErrorCode.UNKNOWN_RECORD)
    prefix, number, corollary = match.groups()
    return (_ID_ORDER[prefix], int(number), 1 if corollary else 0)


def normalize_id(selector: Union[str, int]) -> str:
    """
    Accept "22", "Th 22", "th22", "Note 9", "Note 10 Cor", "Scholion 3".
    """
    text = str(selector).strip()
    if text.isdigit():
        return f"Th {int(text)}"
    match = re.match(r'^(th|theorem|note|scholion)\s*(\d+)\s*(cor(?:ollary)?)?$', text, re.IGNORECASE)
    if not match:
        raise UsageError("not a record selector", text, code=ErrorCode.UNKNOWN_RECORD)
    prefix, number, corollary = match.groups()
    prefix = {'th': 'Th', 'theorem': 'Th', 'note': 'Note', 'scholion': 'Scholion'}[prefix.lower()]
    return f"{prefix} {int(number)}" + (' Cor' if corollary else '')


def default_catalog_path() -> Path:
    return Path(str(resources.files('formdiv').joinpath('data', 'catalog.json')))


def load_catalog(path: Optional[Path] = None) -> List[CatalogRecord]:
    """
    Load and validate the catalog asset, sorted by record id.

    Raises CatalogError naming the offending record when anything is malformed.
    """
    path = Path(path) if path is not None else default_catalog_path()
    try:
        raw = json.loads(path.read_text(encoding='utf-8'))
    except FileNotFoundError:
        raise CatalogError("catalog asset missing", str(path), code=ErrorCode.CATALOG_MISSING)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"catalog is not valid JSON ({exc.msg})", f"{path}:{exc.lineno}")

    if not isinstance(raw, dict) or raw.get('schema') != SCHEMA_VERSION:
        found = raw.get('schema') if isinstance(raw, dict) else None
        raise CatalogError(f"unsupported catalog schema {found!r}", str(path), code=ErrorCode.CATALOG_SCHEMA)
    entries = raw.get('records')
    if not isinstance(entries, list):
        raise CatalogError("catalog has no record list", str(path))

    records: List[CatalogRecord] = []
    seen: Dict[str, int] = {}
    for index, entry in enumerate(entries):
        name = entry.get('id', f"#{index}") if isinstance(entry, dict) else f"#{index}"
        try:
            record = CatalogRecord.model_validate(entry)
        except ValidationError as exc:
            first = exc.errors()[0]
            where = '.'.join(str(part) for part in first.get('loc', ()))
            detail = f"{where}: {first['msg']}" if where else first['msg']
            raise CatalogError(f"malformed record ({detail})", str(name))
        if record.id in seen:
            raise CatalogError("duplicate record id", record.id)
        seen[record.id] = index
        records.append(record)

    records.sort(key=lambda r: r.sort_key)
    logger.debug("loaded %d catalog records from %s", len(records), path)
    return records


def find_record(records: List[CatalogRecord], selector: Union[str, int]) -> CatalogRecord:
    record_id = normalize_id(selector)
    for record in records:
        if record.id == record_id:
            return record
    raise UsageError("no such record in the catalog", record_id, code=ErrorCode.UNKNOWN_RECORD)
