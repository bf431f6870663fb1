#!/usr/bin/env python3
"""Generate the synthetic two-zone, two-week document corpus used by the
pipeline tests.

The output mirrors what `unavail fetch` leaves on disk: one payload per
(zone, document type, UTC day) -- a single XML document, a ZIP of documents, or
an acknowledgement when nothing matches -- plus its JSON cache record. Also
writes the registry, installed-capacity, unit-nominal and config files.

Usage: make_corpus.py [output_dir]   (default: tests/data/corpus next to this file)
"""

import datetime as dt
import hashlib
import io
import json
import pathlib
import random
import sys
import zipfile

ZONES = {"GB": "10YGB----------A", "FR": "10YFR-RTE------C"}
WINDOW_START = dt.datetime(2017, 2, 5, tzinfo=dt.timezone.utc)
WINDOW_DAYS = 14
DOC_TYPES = ("A80", "A77")
FETCHED_AT = "2024-01-01T00:00:00Z"

# (psr type, fuel name or None for renewables, nominal MW choices)
UNIT_KINDS = [
    ("B04", "CCGT", [400, 450, 820, 1250]),
    ("B05", "Coal", [500, 660]),
    ("B14", "Nuclear", [1100, 1300]),
    ("B10", "Hydro", [300, 360]),
    ("B01", "Biomass", [330, 645]),
    ("B19", None, [250]),
]


def iso(t):
    return t.strftime("%Y-%m-%dT%H:%MZ")


def num(v):
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return s or "0"


def series_xml(s):
    pts = "".join(
        f"      <Point><position>{p}</position><quantity>{num(q)}</quantity></Point>\n" for p, q in s["points"]
    )
    return (
        "  <TimeSeries>\n"
        "    <mRID>1</mRID>\n"
        f"    <businessType>{s['business']}</businessType>\n"
        f"    <biddingZone_Domain.mRID codingScheme=\"A01\">{s['domain']}</biddingZone_Domain.mRID>\n"
        "    <quantity_Measure_Unit.name>MAW</quantity_Measure_Unit.name>\n"
        "    <curveType>A03</curveType>\n"
        f"    <production_RegisteredResource.mRID codingScheme=\"A01\">{s['unit']}-PU</production_RegisteredResource.mRID>\n"
        f"    <production_RegisteredResource.name>{s['name']}</production_RegisteredResource.name>\n"
        f"    <production_RegisteredResource.pSRType.psrType>{s['psr']}</production_RegisteredResource.pSRType.psrType>\n"
        "    <production_RegisteredResource.pSRType.powerSystemResources.mRID codingScheme=\"A01\">"
        f"{s['unit']}</production_RegisteredResource.pSRType.powerSystemResources.mRID>\n"
        "    <production_RegisteredResource.pSRType.powerSystemResources.nominalP unit=\"MAW\">"
        f"{num(s['nominal'])}</production_RegisteredResource.pSRType.powerSystemResources.nominalP>\n"
        "    <Available_Period>\n"
        f"      <timeInterval><start>{iso(s['start'])}</start><end>{iso(s['end'])}</end></timeInterval>\n"
        f"      <resolution>{s['resolution']}</resolution>\n"
        f"{pts}"
        "    </Available_Period>\n"
        "  </TimeSeries>\n"
    )


def document(doc):
    body = "".join(series_xml(s) for s in doc["series"])
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        '<Unavailability_MarketDocument xmlns="urn:iec62325.351:tc57wg16:451-6:outagedocument:3:0">\n'
        f"  <mRID>{doc['mrid']}</mRID>\n"
        f"  <revisionNumber>{doc['revision']}</revisionNumber>\n"
        f"  <type>{doc['type']}</type>\n"
        "  <process.processType>A26</process.processType>\n"
        "  <createdDateTime>2017-01-15T00:00:00Z</createdDateTime>\n"
        f"{body}"
        f"  <docStatus><value>{doc['status']}</value></docStatus>\n"
        "</Unavailability_MarketDocument>\n"
    )


def acknowledgement():
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        '<Acknowledgement_MarketDocument xmlns="urn:iec62325.351:tc57wg16:451-1:acknowledgementdocument:7:0">\n'
        "  <mRID>ack</mRID>\n"
        "  <Reason><code>999</code><text>No matching data found</text></Reason>\n"
        "</Acknowledgement_MarketDocument>\n"
    )


def make_units(rng, zone, domain, doc_type, count):
    units = []
    for k in range(count):
        psr, fuel, sizes = UNIT_KINDS[k % len(UNIT_KINDS)]
        units.append(
            {
                "unit": f"48W{zone}{doc_type}{k:04d}X",
                "name": f"{zone} station {doc_type}-{k}",
                "psr": psr,
                "fuel": fuel,
                "nominal": float(rng.choice(sizes)),
                "domain": domain,
            }
        )
    return units


def outage_series(rng, unit, business, start, hours):
    end = start + dt.timedelta(hours=hours)
    s = dict(unit, business=business, start=start, end=end, resolution="PT1M")
    # Available capacity: mostly a full outage, sometimes partial, sometimes a
    # two-step curve (partial return to service part-way through).
    nominal = unit["nominal"]
    mode = rng.random()
    if mode < 0.5 or hours < 4:
        s["points"] = [(1, 0.0)]
    elif mode < 0.8:
        s["points"] = [(1, round(nominal * rng.uniform(0.2, 0.7)))]
    else:
        step = rng.randrange(1, hours) * 60 + 1
        s["points"] = [(1, 0.0), (step, round(nominal * rng.uniform(0.3, 0.8)))]
    return s


def zone_documents(rng, zone, domain, doc_type):
    lo = WINDOW_START - dt.timedelta(days=3)
    span_h = (WINDOW_DAYS + 5) * 24
    units = make_units(rng, zone, domain, doc_type, 14 if doc_type == "A80" else 6)
    docs = []
    serial = 0

    def new_doc(series, revision=1, status="A05", mrid=None):
        nonlocal serial
        serial += 1
        return {
            "mrid": mrid or f"{zone}-{doc_type}-{serial:05d}",
            "revision": revision,
            "type": doc_type,
            "status": status,
            "series": series,
        }

    for u in units:
        # Forced outages: short and frequent.
        for _ in range(rng.randint(2, 5)):
            start = lo + dt.timedelta(minutes=rng.randrange(0, span_h * 60, 5))
            docs.append(new_doc([outage_series(rng, u, "A54", start, rng.randint(2, 60))]))
        # Planned outages: long, aligned to hours.
        if rng.random() < 0.6:
            start = lo + dt.timedelta(hours=rng.randrange(0, span_h))
            docs.append(new_doc([outage_series(rng, u, "A53", start, rng.randint(48, 240))]))

    thermal = [u for u in units if u["fuel"] is not None]
    # A revised report: the second revision shortens the outage.
    u = thermal[0]
    start = WINDOW_START + dt.timedelta(days=2, hours=6)
    first = new_doc([outage_series(rng, u, "A54", start, 96)])
    docs.append(first)
    second = dict(first, revision=2, series=[dict(first["series"][0], end=start + dt.timedelta(hours=30))])
    docs.append(second)
    # A withdrawn report.
    docs.append(new_doc([outage_series(rng, thermal[1], "A54", start + dt.timedelta(days=3), 40)], status="A13"))
    # An implausible reduction (available capacity quoted far below zero is not
    # possible, so use a mis-stated nominal: 1500 MW off a 750 MW unit).
    bad = dict(thermal[2], nominal=750.0)
    s = outage_series(rng, bad, "A54", start + dt.timedelta(days=5), 12)
    s["points"] = [(1, -750.0)]
    docs.append(new_doc([s]))
    # Overlapping forced and planned reports for the same incident.
    u = thermal[3]
    inc = WINDOW_START + dt.timedelta(days=8, hours=3)
    docs.append(new_doc([dict(outage_series(rng, u, "A54", inc, 20), points=[(1, 0.0)])]))
    docs.append(new_doc([dict(outage_series(rng, u, "A53", inc, 20), points=[(1, 0.0)])]))
    return units, docs


def write_day(root, zone, doc_type, day, docs):
    d = root / "cache" / zone / doc_type
    d.mkdir(parents=True, exist_ok=True)
    xml = [document(x) for x in docs]
    if not xml:
        payload, ext = acknowledgement().encode(), ".xml"
    elif len(xml) == 1:
        payload, ext = xml[0].encode(), ".xml"
    else:
        buf = io.BytesIO()
        with zipfile.ZipFile(buf, "w") as zf:
            for i, x in enumerate(xml):
                info = zipfile.ZipInfo(f"{docs[i]['mrid']}_r{docs[i]['revision']}.xml", (1980, 1, 1, 0, 0, 0))
                info.compress_type = zipfile.ZIP_DEFLATED if i % 2 else zipfile.ZIP_STORED
                zf.writestr(info, x)
        payload, ext = buf.getvalue(), ".zip"
    name = day.strftime("%Y-%m-%d")
    (d / (name + ext)).write_bytes(payload)
    record = {
        "zone": zone,
        "date": name,
        "document_type": doc_type,
        "file": name + ext,
        "bytes": len(payload),
        "sha256": hashlib.sha256(payload).hexdigest(),
        "pages": 1,
        "fetched_at": FETCHED_AT,
    }
    (d / (name + ".json")).write_text(json.dumps(record, indent=2) + "\n")


def main():
    root = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else pathlib.Path(__file__).parent / "corpus"
    rng = random.Random(20170205)
    registry = []
    installed = {}
    nominals = []
    for zone, domain in ZONES.items():
        for doc_type in DOC_TYPES:
            units, docs = zone_documents(rng, zone, domain, doc_type)
            for u in units:
                if u["fuel"] is None:
                    continue
                registry.append((zone, u["fuel"], int(u["nominal"])))
                installed[(zone, u["fuel"])] = installed.get((zone, u["fuel"]), 0) + int(u["nominal"])
            # The registry corrects one unit's reported nominal capacity.
            nominals.append((units[0]["unit"], units[0]["nominal"] + 10))
            for k in range(WINDOW_DAYS):
                day = WINDOW_START + dt.timedelta(days=k)
                nxt = day + dt.timedelta(days=1)
                todays = [
                    x for x in docs if any(s["start"] < nxt and s["end"] > day for s in x["series"])
                ]
                # One day with nothing reported exercises the acknowledgement path.
                if (zone, doc_type, k) == ("FR", "A77", WINDOW_DAYS - 1):
                    todays = []
                write_day(root, zone, doc_type, day, todays)
    with open(root / "registry.csv", "w") as f:
        f.write("zone,fuel,capacity_mw\n")
        for z, fuel, mw in registry:
            f.write(f"{z},{fuel},{mw}\n")
    with open(root / "installed_capacity.csv", "w") as f:
        f.write("zone,fuel,capacity_mw\n")
        for (z, fuel), mw in sorted(installed.items()):
            f.write(f"{z},{fuel},{mw}\n")
    with open(root / "unit_nominals.csv", "w") as f:
        f.write("unit_id,nominal_mw\n")
        for u, mw in nominals:
            f.write(f"{u},{num(mw)}\n")
    config = {
        "zones": list(ZONES),
        "windows": [
            {
                "label": "feb17",
                "start": iso(WINDOW_START),
                "end": iso(WINDOW_START + dt.timedelta(days=WINDOW_DAYS)),
            }
        ],
        "cache_dir": "cache",
        "output_dir": "out",
        "seed": 20170205,
        "registry_path": "registry.csv",
        "installed_capacity_path": "installed_capacity.csv",
        "unit_nominals_path": "unit_nominals.csv",
        "document_types": list(DOC_TYPES),
        "model_draws": 3,
        "histogram_bin_mw": 500,
        "zone_codes": ZONES,
        "api": {"token_env": "ENTSOE_API_TOKEN", "request_delay_ms": 0},
    }
    (root / "config.json").write_text(json.dumps(config, indent=2) + "\n")


if __name__ == "__main__":
    main()
