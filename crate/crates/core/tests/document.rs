use contextuality::catalog;
use contextuality::document::{read_model, write_model, ModelDocument, Strictness};
use contextuality::rational::rat;
use contextuality::{Error, Semiring};

const SMALL: &str = r#"{
  "version": 1,
  "measurements": ["a", "b"],
  "outcomes": ["0", "1"],
  "contexts": [["a", "b"]],
  "semiring": "nonneg",
  "tables": [
    { "context": ["a", "b"],
      "entries": [ { "outcomes": ["0", "0"], "weight": "1/2" },
                   { "outcomes": ["1", "1"], "weight": "1/2" } ] }
  ]
}"#;

fn location(e: Error) -> String {
    match e {
        Error::Parse { location, .. } => location,
        other => panic!("expected a parse error, got {other}"),
    }
}

#[test]
fn catalog_round_trips() {
    for entry in catalog::models() {
        let m = entry.expect_model();
        let text = write_model(m);
        assert_eq!(&read_model(&text).unwrap(), m, "{}", entry.name);
        let doc = ModelDocument::parse(&text, Strictness::Strict).unwrap();
        assert_eq!(doc.scenario().unwrap().measurements(), m.scenario().measurements());
        assert_eq!(doc.to_json(), text);
    }
    for entry in [catalog::peres_mermin_cover(), catalog::cabello18_cover(), catalog::triangle_cover()] {
        let doc = ModelDocument::from_scenario(&entry.scenario);
        let back = ModelDocument::parse(&doc.to_json(), Strictness::Strict).unwrap();
        assert!(!back.has_tables());
        assert_eq!(back.scenario().unwrap(), entry.scenario);
    }
}

#[test]
fn missing_entries_weigh_zero() {
    let m = read_model(SMALL).unwrap();
    assert_eq!(m.table(0).rationals(), vec![rat(1, 2), rat(0, 1), rat(0, 1), rat(1, 2)]);
    assert_eq!(m.semiring(), Semiring::NonNegative);
}

#[test]
fn entries_follow_the_listed_context_order() {
    let swapped = SMALL
        .replace(r#""context": ["a", "b"]"#, r#""context": ["b", "a"]"#)
        .replace(r#"["0", "0"], "weight": "1/2""#, r#"["1", "0"], "weight": "1/2""#)
        .replace(r#"["1", "1"], "weight": "1/2""#, r#"["0", "1"], "weight": "1/2""#);
    let m = read_model(&swapped).unwrap();
    // b=1, a=0 and b=0, a=1.
    assert_eq!(m.table(0).rationals(), vec![rat(0, 1), rat(1, 2), rat(1, 2), rat(0, 1)]);
}

#[test]
fn strictness_governs_unknown_fields() {
    let extra = SMALL.replace(r#""version": 1,"#, r#""version": 1, "colour": "red","#);
    assert_eq!(location(ModelDocument::parse(&extra, Strictness::Strict).unwrap_err()), "document");
    assert!(ModelDocument::parse(&extra, Strictness::Lenient).unwrap().model().is_ok());

    let nested = SMALL.replace(r#""weight": "1/2" },"#, r#""weight": "1/2", "note": 1 },"#);
    assert_eq!(location(ModelDocument::parse(&nested, Strictness::Strict).unwrap_err()), "tables[0].entries[0]");
    assert!(ModelDocument::parse(&nested, Strictness::Lenient).is_ok());
}

#[test]
fn errors_are_located() {
    let truncated = &SMALL[..60];
    assert!(location(read_model(truncated).unwrap_err()).starts_with("line "));

    let bad_weight = SMALL.replacen(r#""1/2""#, r#""half""#, 1);
    assert_eq!(location(read_model(&bad_weight).unwrap_err()), "tables[0].entries[0].weight");

    let bad_outcome = SMALL.replacen(r#"["0", "0"]"#, r#"["0", "7"]"#, 1);
    assert_eq!(location(read_model(&bad_outcome).unwrap_err()), "tables[0].entries[0].outcomes");

    let duplicate = SMALL.replacen(r#"["1", "1"]"#, r#"["0", "0"]"#, 1);
    assert_eq!(location(read_model(&duplicate).unwrap_err()), "tables[0].entries[1].outcomes");

    let bad_context = SMALL.replacen(r#""context": ["a", "b"]"#, r#""context": ["a"]"#, 1);
    assert_eq!(location(read_model(&bad_context).unwrap_err()), "tables[0].context");

    let version = SMALL.replacen(r#""version": 1"#, r#""version": 2"#, 1);
    assert_eq!(location(read_model(&version).unwrap_err()), "version");

    let no_version = SMALL.replacen(r#""version": 1,"#, "", 1);
    assert!(read_model(&no_version).is_err());
}

#[test]
fn boolean_weights_are_zero_or_one() {
    let boolean = SMALL.replace("nonneg", "boolean").replace("1/2", "1");
    let m = read_model(&boolean).unwrap();
    assert_eq!(m.semiring(), Semiring::Boolean);
    let bad = SMALL.replace("nonneg", "boolean");
    assert!(read_model(&bad).is_err());
}

#[test]
fn models_are_checked_unless_raw() {
    let skewed = SMALL.replacen(r#""weight": "1/2""#, r#""weight": "1/4""#, 1);
    assert!(read_model(&skewed).is_err());
    let doc = ModelDocument::parse(&skewed, Strictness::Strict).unwrap();
    assert_eq!(doc.raw_model().unwrap().table(0).rationals()[0], rat(1, 4));
}

#[test]
fn metadata_survives() {
    let doc = ModelDocument::from_model(catalog::bell().expect_model()).with_metadata("source", "fixture");
    let back = ModelDocument::parse(&doc.to_json(), Strictness::Strict).unwrap();
    assert_eq!(back.metadata["source"], "fixture");
    assert_eq!(back, doc);
}
