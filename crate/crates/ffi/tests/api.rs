use std::ffi::{CStr, CString};
use std::ptr;

use isac_region_ffi::*;

const K5: &str = r#"{"nodes": 5, "source": 1, "sink": 5, "sensing_area": [2, 3, 4],
    "links": [{"a": 1, "b": 2, "capacity": 6}, {"a": 2, "b": 3, "capacity": 5},
              {"a": 3, "b": 4, "capacity": 6}, {"a": 4, "b": 5, "capacity": 4}]}"#;

const DIAMOND: &str = r#"{"nodes": 4, "source": 1, "sink": 4, "sensing_area": [2, 4],
    "links": [{"a": 1, "b": 2, "capacity": 10}, {"a": 1, "b": 3, "capacity": 10},
              {"a": 2, "b": 4, "capacity": 10}, {"a": 3, "b": 4, "capacity": 10}]}"#;

fn load(json: &str) -> *mut IsacNetwork {
    let text = CString::new(json).unwrap();
    let mut net = ptr::null_mut();
    let status = unsafe { isac_network_from_json(text.as_ptr(), &mut net) };
    assert_eq!(status, IsacStatus::Ok, "{}", last_error());
    assert!(!net.is_null());
    net
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(isac_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn k5_characteristic_values() {
    let net = load(K5);
    let (mut s_star, mut f_star, mut f_tilde, mut s_tilde, mut v) = (0.0, 0.0, -1.0, 0.0, 0.0);
    let mut calls = 0u32;
    let mut avoiding = true;
    unsafe {
        assert_eq!(isac_max_sensing(net, &mut s_star), IsacStatus::Ok);
        assert_eq!(isac_max_throughput(net, &mut f_star), IsacStatus::Ok);
        assert_eq!(isac_free_communication(net, &mut f_tilde), IsacStatus::Ok);
        assert_eq!(
            isac_approx_free_sensing(net, 1e-4 * 11.0, &mut s_tilde, &mut calls),
            IsacStatus::Ok
        );
        assert_eq!(
            isac_max_throughput_at_sensing(net, 7.0, &mut v),
            IsacStatus::Ok
        );
        assert_eq!(isac_has_avoiding_path(net, &mut avoiding), IsacStatus::Ok);
        isac_network_free(net);
    }
    assert_eq!(s_star, 11.0);
    assert!((f_star - 4.0).abs() < 1e-9);
    assert!(f_tilde.abs() < 1e-9);
    assert!((s_tilde - 3.0).abs() < 1e-3);
    assert!(calls > 0 && calls <= 15);
    assert!((v - 2.0).abs() < 1e-9);
    assert!(!avoiding);
    assert_eq!(last_error(), "");
}

#[test]
fn diamond_region_through_handles() {
    let net = load(DIAMOND);
    let mut region = ptr::null_mut();
    unsafe {
        assert_eq!(
            isac_trace_region(net, 0.0, 0.0, &mut region),
            IsacStatus::Ok
        );
        let mut n = 0usize;
        assert_eq!(isac_region_breakpoint_count(region, &mut n), IsacStatus::Ok);
        let points: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let (mut s, mut f) = (0.0, 0.0);
                assert_eq!(
                    isac_region_breakpoint(region, i, &mut s, &mut f),
                    IsacStatus::Ok
                );
                (s, f)
            })
            .collect();
        assert_eq!(points, vec![(10.0, 0.0), (10.0, 10.0), (0.0, 20.0)]);

        let mut m = 0usize;
        assert_eq!(isac_region_segment_count(region, &mut m), IsacStatus::Ok);
        assert_eq!(m, 2);
        let mut seg = IsacSegment {
            start: 0,
            end: 0,
            kind: IsacSegmentKind::FreeSensing,
            ds_df: 0.0,
            k: 0,
        };
        assert_eq!(isac_region_segment(region, 1, &mut seg), IsacStatus::Ok);
        assert_eq!(seg.kind, IsacSegmentKind::Tradeoff);
        assert_eq!(seg.k, 1);
        assert!((seg.ds_df + 1.0).abs() < 1e-9);
        assert_eq!(isac_region_segment(region, 0, &mut seg), IsacStatus::Ok);
        assert_eq!(seg.kind, IsacSegmentKind::FreeCommunication);
        assert_eq!(seg.k, 0);

        assert_eq!(
            isac_region_segment(region, 2, &mut seg),
            IsacStatus::IndexOutOfBounds
        );
        assert!(last_error().contains("segment 2"));
        let (mut s, mut f) = (0.0, 0.0);
        assert_eq!(
            isac_region_breakpoint(region, 3, &mut s, &mut f),
            IsacStatus::IndexOutOfBounds
        );
        isac_region_free(region);
        isac_network_free(net);
    }
}

#[test]
fn error_codes() {
    let mut net = ptr::null_mut();
    let bad = CString::new("{\"nodes\": 3,").unwrap();
    let loop_ = CString::new(
        r#"{"nodes": 3, "source": 1, "sink": 3, "links": [{"a": 2, "b": 2, "capacity": 1}]}"#,
    )
    .unwrap();
    unsafe {
        assert_eq!(
            isac_network_from_json(bad.as_ptr(), &mut net),
            IsacStatus::ParseError
        );
        assert!(net.is_null());
        assert_eq!(
            isac_network_from_json(loop_.as_ptr(), &mut net),
            IsacStatus::ValidationError
        );
        assert!(last_error().contains("self-loop at node 2"));
        assert_eq!(
            isac_network_from_json(ptr::null(), &mut net),
            IsacStatus::NullPointer
        );
        let invalid = [0xffu8, 0];
        assert_eq!(
            isac_network_from_json(invalid.as_ptr().cast(), &mut net),
            IsacStatus::InvalidUtf8
        );

        let k5 = load(K5);
        let mut v = 0.0;
        assert_eq!(
            isac_max_throughput_at_sensing(k5, 12.0, &mut v),
            IsacStatus::OutOfRange
        );
        assert!(last_error().contains("outside [0, 11]"));
        assert_eq!(
            isac_max_throughput_at_sensing(k5, 1.0, ptr::null_mut()),
            IsacStatus::NullPointer
        );
        assert_eq!(
            isac_max_sensing(ptr::null(), &mut v),
            IsacStatus::NullPointer
        );
        assert_eq!(
            isac_approx_free_sensing(k5, 0.0, &mut v, ptr::null_mut()),
            IsacStatus::InvalidArgument
        );
        let mut region = ptr::null_mut();
        assert_eq!(
            isac_trace_region(k5, f64::NAN, 0.0, &mut region),
            IsacStatus::InvalidArgument
        );
        assert!(region.is_null());
        isac_network_free(k5);
        isac_network_free(ptr::null_mut());
        isac_region_free(ptr::null_mut());
    }
    let name = unsafe { CStr::from_ptr(isac_status_name(IsacStatus::OutOfRange)) };
    assert_eq!(name.to_str().unwrap(), "out of range");
}
