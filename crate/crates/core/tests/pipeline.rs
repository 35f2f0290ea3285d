use flatrat::error::Limits;
use flatrat::flat_rat::{bool_comb_empty, Monoid};
use flatrat::singular::monoid_member;
use flatrat::syntax::{parse_bool, parse_flat, parse_matrix};

fn member(g: &str, e: &str, monoid: Monoid) -> bool {
    monoid_member(&parse_matrix(g).unwrap(), &parse_flat(e).unwrap(), monoid, &Limits::default()).unwrap()
}

#[test]
fn parsed_queries_over_each_monoid() {
    assert!(member("[[1,4],[0,1]]", "(X)*", Monoid::Gl2z));
    assert!(!member("[[1,3],[0,1]]", "(X)*", Monoid::Gl2z));
    assert!(member("[[1,1/2],[0,1]]", "[[1,0],[0,2]] (T) [[1,0],[0,1/2]]", Monoid::Gl2z));
    assert!(member("[[2,0],[0,8]]", "([[1,0],[0,2]] | [[2,0],[0,2]])*", Monoid::P2q));
    assert!(!member("[[2,0],[0,8]]", "([[1,0],[0,2]])*", Monoid::P2q));
    assert!(member("[[0,0],[0,0]]", "(T* [[1,0],[0,0]])* (S) [[1,0],[0,0]]", Monoid::P));
    assert!(member("[[3,3],[0,0]]", "([[3,0],[0,3]]) [[1,0],[0,0]] (T)", Monoid::PPrime));
    assert!(!member("[[3,3],[0,0]]", "([[1,0],[0,0]]) (T)", Monoid::PPrime));
}

#[test]
fn boolean_combinations() {
    let l = Limits::default();
    assert!(bool_comb_empty(&parse_bool("(T*) \\ (T* | S)").unwrap(), &l).unwrap());
    assert!(!bool_comb_empty(&parse_bool("(T* | S) \\ (T*)").unwrap(), &l).unwrap());
    assert!(bool_comb_empty(&parse_bool("(X*) & (Y Y*)").unwrap(), &l).unwrap());
    assert!(!bool_comb_empty(&parse_bool("(T*) & ((T T)*)").unwrap(), &l).unwrap());
}
