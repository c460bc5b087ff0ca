//! Golden-file checks: the JSON serialization of a few series is pinned
//! byte-for-byte, so any change to coefficients, offsets, or the wire format
//! shows up as a diff against the committed files.

use schurq::identities::{series_c_bilateral, series_e_product};
use schurq::partitions::{count_distinct_congruent, SchurParams};
use schurq::qseries::{theta_sum_series, QSeries};

fn check_golden(series: &QSeries, golden: &str) {
    let rendered = series.to_json();
    assert_eq!(rendered, golden.trim_end(), "serialization drifted from the golden file");
    let parsed = QSeries::from_json(golden).expect("golden file parses");
    assert_eq!(&parsed, series, "golden round-trip mismatch");
}

#[test]
fn distinct_parts_series_golden() {
    let p = SchurParams::new(3, 1).unwrap();
    let series = series_e_product(p, 32);
    check_golden(&series, include_str!("golden/e_product_3_1_t32.json"));
    // the golden coefficients are anchored to the enumeration oracle, not
    // just to a previous run of the same code
    for n in 0..=32u64 {
        assert_eq!(
            series.coefficient(n as i64).unwrap(),
            num_bigint::BigInt::from(count_distinct_congruent(p, n))
        );
    }
}

#[test]
fn theta_sum_series_golden() {
    let p = SchurParams::new(5, 2).unwrap();
    let series = theta_sum_series(p, 32).unwrap();
    assert_eq!(series.offset24(), -9);
    check_golden(&series, include_str!("golden/theta_sum_5_2_t32.json"));
}

#[test]
fn bilateral_series_golden() {
    let p = SchurParams::new(4, 1).unwrap();
    let series = series_c_bilateral(p, 32);
    check_golden(&series, include_str!("golden/c_bilateral_4_1_t32.json"));
}
