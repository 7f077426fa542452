use qchain::multisum::{rogers_ramanujan, Side};
use qchain::registry::{self, check, exit_code, Comparison, IdentityRecord, Params, Status};
use qchain::series::rat;
use qchain::{Error, LaurentSeries, QMonomial};

#[test]
fn sample_checks() {
    assert_eq!(check("rr0", &Params::none(), 80).unwrap().status, Status::Verified);
    let v = check("r1_m", &Params::kz(3, QMonomial::MINUS_ONE), 40).unwrap();
    assert_eq!(v.status, Status::Verified);
    assert!(v.first_discrepancy.is_none());
}

#[test]
fn default_k_and_z() {
    let v = check("r2_m", &Params::none(), 30).unwrap();
    assert_eq!(v.params, Params::kz(3, QMonomial::MINUS_ONE));
    assert_eq!(v.status, Status::Verified);
}

fn corrupted(_: &Params, n: i64) -> qchain::Result<Vec<Comparison>> {
    let good = rogers_ramanujan(0, Side::Lhs, n)?;
    let mut c = good.coefficients().to_vec();
    c[11] += rat(1);
    let bad = LaurentSeries::from_coeffs(good.min_exp(), c, n);
    Ok(vec![Comparison::new("corrupted", good, bad)])
}

#[test]
fn injected_bug_fails_the_run() {
    let mut records: Vec<IdentityRecord> = registry::registry()
        .iter()
        .filter(|r| ["jtp", "rr0", "diff_mockid3"].contains(&r.id))
        .cloned()
        .collect();
    assert_eq!(exit_code(&registry::run_records(&records, Some(30), 2)), 0);

    let grid = records[1].grid.clone();
    records.push(IdentityRecord::new(
        "rr0_bug",
        "self-test",
        30,
        registry::ParamDomain::Fixed,
        grid,
        corrupted,
    ));
    let verdicts = registry::run_records(&records, Some(30), 2);
    assert_eq!(exit_code(&verdicts), 1);
    let bad = verdicts.iter().find(|v| v.id == "rr0_bug").unwrap();
    assert_eq!(bad.status, Status::Failed);
    let d = bad.first_discrepancy.as_ref().unwrap();
    assert_eq!((d.exponent, d.right.clone() - d.left.clone()), (11, rat(1)));
    assert_eq!(
        verdicts.iter().find(|v| v.id == "diff_mockid3").unwrap().status,
        Status::Skipped
    );
}

#[test]
fn failed_always_has_a_discrepancy() {
    let verdicts = registry::run_records(
        &[IdentityRecord::new(
            "bug",
            "self-test",
            20,
            registry::ParamDomain::Fixed,
            registry::lookup("rr0").unwrap().grid.clone(),
            corrupted,
        )],
        None,
        1,
    );
    assert!(verdicts
        .iter()
        .all(|v| v.status != Status::Failed || v.first_discrepancy.is_some()));
}

#[test]
fn errors() {
    assert!(matches!(
        check("missing", &Params::none(), 10),
        Err(Error::UnknownIdentity(_))
    ));
    assert!(matches!(check("genfoq", &Params::k(0), 10), Err(Error::BadParams(_))));
    assert!(matches!(
        registry::series("R9", &Params::none(), 10),
        Err(Error::UnknownSeries(_))
    ));
    assert!(matches!(
        registry::series("R1", &Params::k(2), 10),
        Err(Error::BadParams(_))
    ));
}
