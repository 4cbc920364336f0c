"""Reading and validating the tab-delimited Treasury yield panel.

The input is a flat tab-delimited text file: a header row ("Date" followed
by the 12 maturity labels) and one row per date with yields in percent.
Cells holding the literal string "N/A" mark missing values; any date row
containing one is dropped whole.
"""

from dataclasses import dataclass
from datetime import date

import numpy as np

MATURITY_LABELS = (
    "1 Mo", "2 Mo", "3 Mo", "6 Mo", "1 Yr", "2 Yr",
    "3 Yr", "5 Yr", "7 Yr", "10 Yr", "20 Yr", "30 Yr",
)

MATURITY_MONTHS = {
    "1 Mo": 1, "2 Mo": 2, "3 Mo": 3, "6 Mo": 6, "1 Yr": 12, "2 Yr": 24,
    "3 Yr": 36, "5 Yr": 60, "7 Yr": 84, "10 Yr": 120, "20 Yr": 240,
    "30 Yr": 360,
}


def _normalize_label(label):
    return " ".join(label.split()).lower()


_CANONICAL = {_normalize_label(lbl): lbl for lbl in MATURITY_LABELS}


@dataclass(frozen=True)
class YieldPanel:
    """A nonnegative N x T yield matrix with maturity and date metadata.

    Rows of ``yields`` are maturities (in ``maturities`` order), columns are
    dates (in ``dates`` order, strictly increasing).  Values are percent.
    """

    yields: np.ndarray
    maturities: tuple
    dates: tuple

    def __post_init__(self):
        arr = np.asarray(self.yields, dtype=float)
        object.__setattr__(self, "yields", arr)
        object.__setattr__(self, "maturities", tuple(self.maturities))
        object.__setattr__(self, "dates", tuple(self.dates))
        if arr.ndim != 2:
            raise ValueError(f"yields must be 2-dimensional, got shape {arr.shape}")
        n, t = arr.shape
        if n != len(self.maturities):
            raise ValueError(
                f"{len(self.maturities)} maturity labels for {n} yield rows"
            )
        if t != len(self.dates):
            raise ValueError(f"{len(self.dates)} dates for {t} yield columns")
        if n < 1 or t < 1:
            raise ValueError(f"panel must be at least 1 x 1, got {n} x {t}")
        if not np.isfinite(arr).all():
            raise ValueError("yields contain non-finite values")
        if (arr < 0).any():
            raise ValueError("yields contain negative values")
        for prev, cur in zip(self.dates, self.dates[1:]):
            if cur <= prev:
                raise ValueError(
                    f"dates must be strictly increasing (chronological order), "
                    f"but {cur} follows {prev}"
                )

    @property
    def n_maturities(self):
        return self.yields.shape[0]

    @property
    def n_dates(self):
        return self.yields.shape[1]


def _parse_date(text, row):
    parts = text.strip().split("/")
    if len(parts) != 3:
        raise ValueError(f"row {row}: cannot parse date {text!r} (expected MM/DD/YY)")
    try:
        month, day, year = (int(p) for p in parts)
    except ValueError:
        raise ValueError(
            f"row {row}: cannot parse date {text!r} (expected MM/DD/YY)"
        ) from None
    if year < 100:
        year += 2000
    try:
        return date(year, month, day)
    except ValueError as exc:
        raise ValueError(f"row {row}: invalid date {text!r}: {exc}") from None


def parse_treasury_tsv(raw):
    """Parse a Treasury yield export into a YieldPanel.

    ``raw`` is the file content as str or bytes.  The header must carry
    "Date" and the 12 canonical maturity labels (case-insensitive,
    whitespace-normalized).  Date rows containing any "N/A" cell are
    dropped whole; everything else must be numeric.  Column s of the
    returned panel corresponds to the s-th surviving input row.
    """
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    lines = [line for line in raw.splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty input")

    header = lines[0].split("\t")
    expected = 1 + len(MATURITY_LABELS)
    if len(header) != expected:
        raise ValueError(
            f"header has {len(header)} columns, expected {expected} "
            f"(Date plus {len(MATURITY_LABELS)} maturities)"
        )
    if _normalize_label(header[0]) != "date":
        raise ValueError(f"first header column is {header[0]!r}, expected 'Date'")
    for j, (got, want) in enumerate(zip(header[1:], MATURITY_LABELS), start=1):
        if _CANONICAL.get(_normalize_label(got)) != want:
            raise ValueError(
                f"header column {j + 1} is {got!r}, expected {want!r}"
            )

    dates = []
    rows = []
    for idx, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        if len(fields) != expected:
            raise ValueError(
                f"row {idx} has {len(fields)} columns, expected {expected}"
            )
        if any(f.strip() == "N/A" for f in fields[1:]):
            continue
        values = []
        for j, cell in enumerate(fields[1:], start=2):
            try:
                values.append(float(cell))
            except ValueError:
                raise ValueError(
                    f"row {idx}, column {j}: cannot parse {cell!r} as a number"
                ) from None
        dates.append(_parse_date(fields[0], idx))
        rows.append(values)

    if not rows:
        raise ValueError("no complete date rows in input (every row had an N/A)")

    yields = np.asarray(rows, dtype=float).T
    return YieldPanel(yields=yields, maturities=MATURITY_LABELS, dates=tuple(dates))


def drop_maturity(panel, label):
    """Return a copy of the panel with one maturity row removed."""
    if label not in panel.maturities:
        raise ValueError(f"maturity {label!r} not in panel")
    keep = [i for i, lbl in enumerate(panel.maturities) if lbl != label]
    return YieldPanel(
        yields=panel.yields[keep],
        maturities=tuple(panel.maturities[i] for i in keep),
        dates=panel.dates,
    )


def panel_to_tsv(panel):
    """Serialize a panel back to the tab-delimited input layout."""
    lines = ["\t".join(("Date",) + tuple(panel.maturities))]
    for s, d in enumerate(panel.dates):
        cells = [d.strftime("%m/%d/%y")]
        cells.extend(repr(float(v)) for v in panel.yields[:, s])
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def maturity_months(labels):
    """Months to maturity for each label, as an integer array."""
    months = []
    for lbl in labels:
        if lbl not in MATURITY_MONTHS:
            raise ValueError(f"unknown maturity label {lbl!r}")
        months.append(MATURITY_MONTHS[lbl])
    return np.asarray(months, dtype=int)
