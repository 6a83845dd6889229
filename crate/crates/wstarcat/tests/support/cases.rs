//! Shared table of CLI golden cases: (name, argv, expected exit code).

pub const CASES: &[(&str, &[&str], i32)] = &[
    ("fuse_ok", &["fuse", "tests/corpus/x.json", "tests/corpus/y.json"], 0),
    ("fuse_mismatch", &["fuse", "tests/corpus/x.json", "tests/corpus/x.json"], 2),
    ("fuse_missing_file", &["fuse", "tests/corpus/nope.json", "tests/corpus/y.json"], 2),
    (
        "fuse_oracle_ok",
        &["fuse-oracle", "tests/corpus/x.json", "tests/corpus/y.json"],
        0,
    ),
    (
        "fuse_oracle_cap",
        &["fuse-oracle", "--cap", "1", "tests/corpus/x.json", "tests/corpus/y.json"],
        2,
    ),
    ("inner_ok", &["inner", "tests/corpus/mod_a.json", "tests/corpus/mod_b.json"], 0),
    (
        "inner_disjoint",
        &["inner", "tests/corpus/mod_c.json", "tests/corpus/mod_d.json"],
        0,
    ),
    ("inner_kind", &["inner", "tests/corpus/mod_a.json", "tests/corpus/alg1.json"], 2),
    ("adjoint_ok", &["adjoint", "tests/corpus/x.json"], 0),
    ("adjoint_kind", &["adjoint", "tests/corpus/mod_a.json"], 2),
    (
        "gram_schmidt_ok",
        &["gram-schmidt", "tests/corpus/mod_a.json", "tests/corpus/mod_b.json"],
        0,
    ),
    ("gram_schmidt_schema", &["gram-schmidt", "tests/corpus/bad.json"], 2),
    ("csb_ok", &["csb", "tests/corpus/iso.json", "tests/corpus/iso.json"], 0),
    (
        "csb_not_isometry",
        &["csb", "tests/corpus/proj.json", "tests/corpus/proj.json"],
        1,
    ),
    ("split_ok", &["split", "tests/corpus/proj.json"], 0),
    ("split_not_idempotent", &["split", "tests/corpus/notproj.json"], 1),
    ("cone_v_member", &["cone-v", "tests/corpus/eta.json"], 0),
    ("cone_v_nonmember", &["cone-v", "tests/corpus/neg.json"], 0),
    (
        "cone_v_expect_fail",
        &["cone-v", "--expect", "nonmember", "tests/corpus/eta.json"],
        1,
    ),
    (
        "cone_h_member",
        &["cone-h", "tests/corpus/id4.json", "tests/corpus/w.json", "tests/corpus/w.json"],
        0,
    ),
    (
        "cone_h_transpose",
        &[
            "cone-h",
            "tests/corpus/theta_t.json",
            "tests/corpus/w.json",
            "tests/corpus/w.json",
        ],
        0,
    ),
    (
        "cone_h_expect_fail",
        &[
            "cone-h",
            "--expect",
            "member",
            "tests/corpus/theta_t.json",
            "tests/corpus/w.json",
            "tests/corpus/w.json",
        ],
        1,
    ),
    (
        "audit_biinv_ok",
        &[
            "audit-biinv",
            "tests/corpus/w.json",
            "tests/corpus/w.json",
            "tests/corpus/w.json",
        ],
        0,
    ),
    (
        "audit_biinv_kind",
        &[
            "audit-biinv",
            "tests/corpus/w.json",
            "tests/corpus/w.json",
            "tests/corpus/alg1.json",
        ],
        2,
    ),
    (
        "audit_vn2_ok",
        &[
            "audit-vn2",
            "tests/corpus/alg1.json",
            "tests/corpus/alg2.json",
            "tests/corpus/alg3.json",
        ],
        0,
    ),
    (
        "audit_vn2_kind",
        &[
            "audit-vn2",
            "tests/corpus/mod_a.json",
            "tests/corpus/alg2.json",
            "tests/corpus/alg3.json",
        ],
        2,
    ),
    ("coherences_ok", &["coherences", "tests/corpus/x.json", "tests/corpus/y.json"], 0),
    (
        "coherences_not_composable",
        &["coherences", "tests/corpus/x.json", "tests/corpus/x.json"],
        2,
    ),
    ("riesz_ok", &["riesz", "tests/corpus/mod_a.json", "tests/corpus/mod_b.json"], 0),
    ("riesz_kind", &["riesz", "tests/corpus/mod_a.json", "tests/corpus/alg1.json"], 2),
    ("reconstruct_ok", &["reconstruct", "tests/corpus/x.json"], 0),
    ("reconstruct_kind", &["reconstruct", "tests/corpus/mod_a.json"], 2),
];
