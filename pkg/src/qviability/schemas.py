"""JSON schemas for the files the CLI reads and writes."""

_number_list = {"type": "array", "items": {"type": "number"}}
_subset = {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1}

SPACE = {
    "type": "object",
    "required": ["variables"],
    "properties": {
        "variables": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["label", "arity"],
                "properties": {"label": {"type": "string"}, "arity": {"type": "integer", "minimum": 2}},
            },
        }
    },
}

DISTRIBUTION = {
    "type": "object",
    "required": ["variables", "values"],
    "properties": {"variables": SPACE["properties"]["variables"], "values": _number_list},
}

PROBLEM = {
    "type": "object",
    "required": ["space", "targets"],
    "properties": {
        "space": SPACE,
        "targets": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["subset", "values"],
                "properties": {"subset": _subset, "values": _number_list},
            },
        },
        "zero_support": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
    },
}

LP_CERTIFICATE = {
    "type": "object",
    "required": ["type", "phase1_objective", "farkas", "gap"],
    "properties": {
        "type": {"const": "lp"},
        "phase1_objective": {"type": "number"},
        "farkas": _number_list,
        "gap": {"type": "number"},
    },
}

COARSE_GRAIN_CERTIFICATE = {
    "type": "object",
    "required": ["type", "kind", "variables", "plus_blocks", "combination", "value", "bound"],
    "properties": {
        "type": {"const": "coarse-grain"},
        "kind": {"enum": ["chsh", "bell"]},
        "variables": _subset,
        "plus_blocks": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "combination": {"type": "string"},
        "value": {"type": "number"},
        "bound": {"type": "number"},
    },
}

VIABILITY_REPORT = {
    "type": "object",
    "required": ["status", "mode", "subsets", "tol", "witness", "certificate"],
    "properties": {
        "status": {"enum": ["viable", "non-viable", "unknown"]},
        "mode": {"enum": ["all-positive", "specified"]},
        "subsets": {"type": "array", "items": _subset},
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "witness": {"oneOf": [{"type": "null"}, DISTRIBUTION]},
        "certificate": {"oneOf": [{"type": "null"}, LP_CERTIFICATE, COARSE_GRAIN_CERTIFICATE]},
        "coarse_grain": {"oneOf": [{"type": "null"}, COARSE_GRAIN_CERTIFICATE]},
        "note": {"type": "string"},
    },
}

MATCH_RESULT = {
    "type": "object",
    "required": ["verdict", "residual", "phase1_objective", "witness", "certificate"],
    "properties": {
        "verdict": {"enum": ["feasible", "infeasible"]},
        "residual": {"type": "number"},
        "phase1_objective": {"type": "number"},
        "numerically_marginal": {"type": "boolean"},
        "witness": {"oneOf": [{"type": "null"}, DISTRIBUTION]},
        "certificate": {"oneOf": [{"type": "null"}, LP_CERTIFICATE]},
    },
}
