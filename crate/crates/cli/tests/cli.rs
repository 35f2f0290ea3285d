use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_flatrat")).args(args).output().unwrap();
    let code = out.status.code().unwrap();
    let text = if code == 0 { out.stdout } else { out.stderr };
    let v = serde_json::from_slice(&text).unwrap_or(Value::Null);
    (code, v)
}

#[test]
fn snf_of_swap() {
    let (code, v) = run(&["snf", "[[0,1],[1,0]]"]);
    assert_eq!(code, 0);
    assert_eq!(v["r"], "1");
    assert_eq!(v["q"], "-1");
}

#[test]
fn member_verdicts() {
    let (code, v) = run(&["member", "[[1,0],[0,4]]", "([[1,0],[0,2]])*", "--monoid", "P2Q"]);
    assert_eq!((code, v["verdict"].clone()), (0, Value::Bool(true)));
    let (_, v) = run(&["member", "[[1,0],[0,16]]", "([[1,0],[0,4]])*", "--monoid", "P2Q"]);
    assert_eq!(v["verdict"], true);
    let (_, v) = run(&["member", "[[1,0],[0,8]]", "([[1,0],[0,4]])*", "--monoid", "P2Q"]);
    assert_eq!(v["verdict"], false);
    let (_, v) = run(&["member", "[[1,0],[0,2]]", "([[1,0],[0,4]])*", "--monoid", "P2Q"]);
    assert_eq!(v["verdict"], false);
    let (_, v) = run(&["member", "[[1,5],[0,1]]", "(T)*", "--monoid", "GL2Z"]);
    assert_eq!(v["verdict"], true);
    let (_, v) = run(&["member", "[[0,0],[0,0]]", "(S) [[1,0],[0,0]] (S) [[1,0],[0,0]]", "--monoid", "Pprime"]);
    assert_eq!(v["verdict"], true);
    let (_, v) = run(&["--def", "A=[[2,0],[0,2]]", "member", "[[2,2],[0,0]]", "(A)* [[1,0],[0,0]] (T)", "--monoid", "Pprime"]);
    assert_eq!(v["verdict"], true);
}

#[test]
fn empty_and_classify() {
    let (code, v) = run(&["empty", "(X) \\ (X)"]);
    assert_eq!((code, v["verdict"].clone()), (0, Value::Bool(true)));
    let (_, v) = run(&["empty", "(T | S) \\ (S)"]);
    assert_eq!(v["verdict"], false);
    let (_, v) = run(&["classify", "[[2,0],[0,2]]", "[[3,0],[0,3]]"]);
    assert_eq!((v["case"].as_str(), v["k"].as_u64()), (Some("DirectProduct"), Some(2)));
    let (_, v) = run(&["classify", "[[1,0],[0,2]]"]);
    assert_eq!(v["case"], "ContainsBS");
    assert_eq!(v["q"], "2");
}

#[test]
fn cosets_and_oracle() {
    let (_, v) = run(&["cosets", "[[1,0],[0,2]]"]);
    assert_eq!(v["count"], 3);
    assert_eq!(v["sl_index"], 3);
    let (_, v) = run(&["oracle", "[[1,3],[0,1]]", "T*", "--bound", "4"]);
    assert_eq!(v["verdict"], true);
    assert_eq!(v["witness"].as_array().unwrap().len(), 3);
    let (_, v) = run(&["oracle", "[[1,5],[0,1]]", "T*", "--bound", "4"]);
    assert_eq!(v["verdict"], Value::Null);
}

#[test]
fn exit_codes() {
    let (code, v) = run(&["member", "[[1,2],[0,1]]", "(T"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "parse");
    assert_eq!(v["column"], 3);
    let (code, v) = run(&["member", "[[1,0],[0,2]]", "([[1,0],[0,2]])*", "--monoid", "GL2Z"]);
    assert_eq!((code, v["error"].as_str()), (1, Some("input")));
    let (code, _) = run(&["snf", "[[0,0],[0,0]]"]);
    assert_eq!(code, 1);
    let (code, v) = run(&["--max-cosets", "5", "cosets", "[[1,0],[0,7]]"]);
    assert_eq!((code, v["error"].as_str()), (2, Some("resource_limit")));
    let (code, _) = run(&["classify", "[[1,1],[0,1]]"]);
    assert_eq!(code, 1);
}
