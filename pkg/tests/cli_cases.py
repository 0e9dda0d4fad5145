"""One representative invocation per CLI command, shared by the CLI and
acceptance tests. Each case is (command, input object or None, extra argv)."""

SIERPINSKI = {"kind": "space", "points": ["a", "b"], "opens": [[], ["a"], ["a", "b"]]}
SQUARE = {"kind": "frame", "size": 4, "leq": [[0, 1], [0, 2], [0, 3], [1, 3], [2, 3]]}
F2 = {"kind": "finite_atoms", "atoms": 2}
FINCOF = {"kind": "fincof"}

CASES = {
    "check": ("check", SIERPINSKI, ["--props", "ultranormal,zero_dimensional"]),
    "classify": ("classify", SQUARE, []),
    "dualize": ("dualize", {"algebra": F2, "family": "all_with_lub"}, []),
    "dualize_frame": ("dualize", SQUARE, []),
    "roundtrip": ("roundtrip", {"algebra": {"kind": "finite_atoms", "atoms": 3}, "family": "all_with_lub"}, []),
    "criteria": ("criteria", {"algebra": FINCOF, "family": "finitely_generated"}, []),
    "criteria_lub": ("criteria", {"algebra": FINCOF, "family": "all_with_lub"}, []),
    "bpa": ("bpa", {"algebra": F2, "generators": [{"explicit": [{"bits": [1, 0]}, {"bits": [0, 1]}]}]}, []),
    "bpa_map": ("bpa", {
        "source": {"algebra": F2, "generators": [{"explicit": [{"bits": [1, 0]}, {"bits": [0, 1]}]}]},
        "target": {"algebra": {"kind": "finite_atoms", "atoms": 1}, "generators": []},
        "map": [[{"bits": [0, 0]}, {"bits": [0]}], [{"bits": [1, 0]}, {"bits": [1]}],
                [{"bits": [0, 1]}, {"bits": [0]}], [{"bits": [1, 1]}, {"bits": [1]}]],
    }, []),
    "enumerate": ("enumerate", None, ["--topologies", "3", "--classify", "--format", "csv"]),
    "enumerate_lattices": ("enumerate", None, ["--lattices", "6", "--classify"]),
    "verify": ("verify", None, ["--bound", "3", "--frame-bound", "6"]),
    "search": ("search", None, ["--satisfy", "normal", "--violate", "ultranormal", "--bound", "2"]),
    "disjointify": ("disjointify", {"algebra": {"kind": "finite_atoms", "atoms": 3},
                                    "chain": [{"bits": [1, 1, 0]}, {"bits": [0, 1, 1]}]}, []),
    "shrink": ("shrink", {"space": {"kind": "space", "points": [0, 1, 2],
                                    "opens": [[], [0], [1, 2], [0, 1, 2]]},
                          "cover": [[0], [1, 2], [0, 1, 2]]}, []),
    "sorgenfrey": ("sorgenfrey", {"M": "3", "intervals": [["0", "2"], ["1", "3"]]}, []),
    "ultrametric": ("ultrametric", {
        "points": ["p1", "p2", "p3", "p4"],
        "dist": [[0, 1, 2, 2], [1, 0, 2, 2], [2, 2, 0, 1], [2, 2, 1, 0]],
        "radius": "1", "C": ["p1"], "D": ["p3"],
    }, []),
}
