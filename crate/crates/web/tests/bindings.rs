use serde_json::Value;
use singlocus_web::{picard_json, recognize_json, scenario_predict_json, GRAND_EXAMPLE};

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn recognize_reports_verdict() {
    let v = parse(&recognize_json("x*y + x*z^2 + y^2*z - z^6", 32).unwrap());
    assert_eq!(v["verdict"], "A_4");
    let err = recognize_json("x*y + + z", 32).unwrap_err();
    assert!(err.contains("offset 6"), "{err}");
    assert!(recognize_json("x", 32).is_err());
    assert!(recognize_json("x*y", 200).is_err());
}

#[test]
fn predict_reports_kind() {
    let v = parse(&scenario_predict_json(r#"{"family":"Spine","m":3,"q":2}"#).unwrap());
    assert_eq!(v["prediction"]["group_order"], 4);
    assert!(scenario_predict_json(r#"{"family":"Pinwheel","r":1}"#).is_err());
    assert!(scenario_predict_json("{").is_err());
}

#[test]
fn grand_example_lattice() {
    let v = parse(&picard_json(GRAND_EXAMPLE).unwrap());
    assert_eq!(v["group"], "<2L1, L2 + L3, 6L3, 4L4, 12L5, 2L6, H>");
    assert_eq!(v["hnf"].as_array().unwrap().len(), 7);
}
