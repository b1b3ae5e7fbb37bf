"""Network file ingestion and result rendering.

JSON is the primary format:

    {
      "units": "pu" | "physical",
      "bases": {"s_base_mva": 10.0, "v_base_kv": 12.47},   # optional
      "buses": [{"id": "0", "p_gen": 0, "q_gen": 0,
                 "p_dem": 0, "q_dem": 0, "root": true}, ...],
      "branches": [{"from": "0", "to": "1", "r": 0.0296, "x": 0.0683}, ...]
    }

The CSV variant is a directory holding ``buses.csv`` and
``branches.csv`` with the same column names (``root`` column optional),
header row required, UTF-8, dot decimal separator. CSV input is always
interpreted as per-unit, since the flat files carry no base record.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import ParseError, SchemaError
from .model import BranchRecord, BusRecord, NetworkInput, PerUnitBases, Units
from .solver import SolveResult

BUS_FIELDS = ("p_gen", "q_gen", "p_dem", "q_dem")
TRUE_WORDS = {"true", "1", "yes"}
FALSE_WORDS = {"false", "0", "no", ""}


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise SchemaError(f"{where}: missing field {key!r}")
    return obj[key]


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise SchemaError(f"{where}: value is not finite")
    return float(value)


def _network_from_dict(doc: dict) -> NetworkInput:
    units_word = _require(doc, "units", "input")
    try:
        units = Units(units_word)
    except ValueError:
        raise SchemaError(f'input: units must be "pu" or "physical", got {units_word!r}')

    bases = None
    if doc.get("bases") is not None:
        raw = doc["bases"]
        bases = PerUnitBases(
            s_base=_number(_require(raw, "s_base_mva", "bases"), "bases.s_base_mva"),
            v_base=_number(_require(raw, "v_base_kv", "bases"), "bases.v_base_kv"),
        )

    raw_buses = _require(doc, "buses", "input")
    if not raw_buses:
        raise SchemaError("input: buses array is empty")
    buses = []
    seen: set[str] = set()
    for pos, raw in enumerate(raw_buses):
        where = f"buses[{pos}]"
        bus_id = str(_require(raw, "id", where))
        if bus_id in seen:
            raise SchemaError(f"{where}: duplicate bus id {bus_id!r}")
        seen.add(bus_id)
        powers = {f: _number(_require(raw, f, where), f"{where}.{f}") for f in BUS_FIELDS}
        buses.append(BusRecord(id=bus_id, is_root=bool(raw.get("root", False)), **powers))

    raw_branches = _require(doc, "branches", "input")
    branches = []
    for pos, raw in enumerate(raw_branches):
        where = f"branches[{pos}]"
        from_id = str(_require(raw, "from", where))
        to_id = str(_require(raw, "to", where))
        for end in (from_id, to_id):
            if end not in seen:
                raise SchemaError(f"{where}: unknown bus id {end!r}")
        branches.append(
            BranchRecord(
                from_bus=from_id,
                to_bus=to_id,
                r=_number(_require(raw, "r", where), f"{where}.r"),
                x=_number(_require(raw, "x", where), f"{where}.x"),
            )
        )

    return NetworkInput(buses=tuple(buses), branches=tuple(branches), bases=bases, units=units)


def _parse_json_network(path: Path) -> NetworkInput:
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: top level must be a JSON object")
    return _network_from_dict(doc)


def _csv_rows(path: Path, required: tuple[str, ...]) -> list[dict]:
    if not path.is_file():
        raise SchemaError(f"{path}: file not found")
    with path.open(newline="", encoding="utf-8-sig") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        missing = [col for col in required if col not in header]
        if missing:
            raise SchemaError(f"{path}: missing columns {missing}")
        return list(reader)


def _csv_number(row: dict, column: str, path: Path, line: int) -> float:
    raw = (row.get(column) or "").strip()
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(f"{path}: line {line}, field {column!r}: not a number: {raw!r}")
    if not math.isfinite(value):
        raise ParseError(f"{path}: line {line}, field {column!r}: value is not finite")
    return value


def _parse_csv_network(directory: Path) -> NetworkInput:
    buses_path = directory / "buses.csv"
    branches_path = directory / "branches.csv"

    buses = []
    seen: set[str] = set()
    for line, row in enumerate(_csv_rows(buses_path, ("id",) + BUS_FIELDS), start=2):
        bus_id = str(row["id"]).strip()
        if not bus_id:
            raise SchemaError(f"{buses_path}: line {line}: empty bus id")
        if bus_id in seen:
            raise SchemaError(f"{buses_path}: line {line}: duplicate bus id {bus_id!r}")
        seen.add(bus_id)
        root_word = (row.get("root") or "").strip().lower()
        if root_word not in TRUE_WORDS | FALSE_WORDS:
            raise ParseError(
                f"{buses_path}: line {line}, field 'root': not a boolean: {root_word!r}"
            )
        buses.append(
            BusRecord(
                id=bus_id,
                is_root=root_word in TRUE_WORDS,
                **{f: _csv_number(row, f, buses_path, line) for f in BUS_FIELDS},
            )
        )
    if not buses:
        raise SchemaError(f"{buses_path}: no bus rows")

    branches = []
    for line, row in enumerate(_csv_rows(branches_path, ("from", "to", "r", "x")), start=2):
        from_id = str(row["from"]).strip()
        to_id = str(row["to"]).strip()
        for end in (from_id, to_id):
            if end not in seen:
                raise SchemaError(f"{branches_path}: line {line}: unknown bus id {end!r}")
        branches.append(
            BranchRecord(
                from_bus=from_id,
                to_bus=to_id,
                r=_csv_number(row, "r", branches_path, line),
                x=_csv_number(row, "x", branches_path, line),
            )
        )

    return NetworkInput(buses=tuple(buses), branches=tuple(branches), units=Units.PER_UNIT)


def parse_network_file(path: str | Path, fmt: str | None = None) -> NetworkInput:
    """Load a network from a JSON file or a CSV directory.

    ``fmt`` is "json" or "csv"; when omitted it is inferred from the
    path (directories are CSV, files are JSON).

    Raises:
        ParseError: Syntactically broken input, with location.
        SchemaError: Missing fields, duplicate or unknown ids.
        ValidationError: Field values violate a record invariant.
        FileNotFoundError: The path does not exist.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"input path does not exist: {path}")
    if fmt is None:
        fmt = "csv" if path.is_dir() else "json"
    if fmt == "json":
        return _parse_json_network(path)
    if fmt == "csv":
        if not path.is_dir():
            raise SchemaError(f"{path}: CSV input must be a directory with buses.csv and branches.csv")
        return _parse_csv_network(path)
    raise SchemaError(f"unknown input format {fmt!r}")


def result_to_dict(result: SolveResult) -> dict:
    """Full-precision dictionary form of a result (JSON-serialisable)."""
    return {
        "iterations": result.iterations,
        "history": list(result.history),
        "nodes": [
            {
                "id": result.node_ids[k],
                "v_real": float(result.voltages[k].real),
                "v_imag": float(result.voltages[k].imag),
                "v_mag": float(result.magnitudes[k]),
                "v_angle_deg": float(result.angles_deg[k]),
            }
            for k in range(len(result.node_ids))
        ],
        "branches": [
            {
                "from": result.branch_from[b],
                "to": result.branch_to[b],
                "i_real": float(result.branch_currents[b].real),
                "i_imag": float(result.branch_currents[b].imag),
                "loss_p": float(result.branch_losses[b].real),
                "loss_q": float(result.branch_losses[b].imag),
            }
            for b in range(len(result.branch_currents))
        ],
        "total_loss": {"p": result.total_loss.real, "q": result.total_loss.imag},
        "source_power": {"p": result.source_power.real, "q": result.source_power.imag},
    }


def parse_result_json(text: str) -> SolveResult:
    """Rebuild a :class:`SolveResult` from its JSON rendering."""
    doc = json.loads(text)
    nodes = doc["nodes"]
    branches = doc["branches"]
    return SolveResult(
        node_ids=tuple(node["id"] for node in nodes),
        voltages=np.array(
            [complex(node["v_real"], node["v_imag"]) for node in nodes], dtype=complex
        ),
        branch_from=tuple(br["from"] for br in branches),
        branch_to=tuple(br["to"] for br in branches),
        branch_currents=np.array(
            [complex(br["i_real"], br["i_imag"]) for br in branches], dtype=complex
        ),
        branch_losses=np.array(
            [complex(br["loss_p"], br["loss_q"]) for br in branches], dtype=complex
        ),
        total_loss=complex(doc["total_loss"]["p"], doc["total_loss"]["q"]),
        source_power=complex(doc["source_power"]["p"], doc["source_power"]["q"]),
        iterations=int(doc["iterations"]),
        history=tuple(float(d) for d in doc["history"]),
    )


def render_result(result: SolveResult, fmt: str = "table", radians: bool = False) -> str:
    """Render a result as an aligned text table or as JSON.

    Table mode prints |V| to 4 decimals and the angle to 2 decimals;
    JSON mode emits every field at full precision and round-trips
    through :func:`parse_result_json` losslessly. Output is
    byte-deterministic for a given result.
    """
    if fmt == "json":
        return json.dumps(result_to_dict(result), indent=2)
    if fmt != "table":
        raise ValueError(f"unknown output format {fmt!r}")

    unit = "rad" if radians else "deg"
    angles = np.angle(result.voltages) if radians else result.angles_deg
    width = max(4, *(len(i) for i in result.node_ids))
    lines = [f"{'node':<{width}}  {'|V| [pu]':>10}  {'angle [' + unit + ']':>12}"]
    for k, bus_id in enumerate(result.node_ids):
        angle = f"{angles[k]:.4f}" if radians else f"{angles[k]:.2f}"
        lines.append(f"{bus_id:<{width}}  {result.magnitudes[k]:>10.4f}  {angle:>12}")
    lines.append("")
    lines.append(f"iterations:   {result.iterations}")
    lines.append(f"total loss:   {_complex_text(result.total_loss)} pu")
    lines.append(f"source power: {_complex_text(result.source_power)} pu")
    return "\n".join(lines) + "\n"


def _complex_text(value: complex) -> str:
    sign = "+" if value.imag >= 0 else "-"
    return f"{value.real:.6f} {sign} j{abs(value.imag):.6f}"
