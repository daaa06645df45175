use std::ffi::{c_char, CStr};
use std::ptr;

use cechkit_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe {
        cech_last_error(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn sample(coords: &[f64], dim: usize, side: f64) -> *mut CechSample {
    let mut s = ptr::null_mut();
    let st = unsafe { cech_sample_from_coords(coords.as_ptr(), coords.len() / dim, dim, side, &mut s) };
    assert_eq!(st, CechStatus::Ok, "{}", last_error());
    s
}

#[test]
fn square_of_four_has_one_loop() {
    // unit square: edges at r = 0.5, diagonals need r = sqrt(2)/2
    let s = sample(&[0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0], 2, 4.0);
    let mut c = ptr::null_mut();
    unsafe {
        assert_eq!(cech_complex_build(s, 0.55, 2, &mut c), CechStatus::Ok);
        assert_eq!(cech_complex_k_cap(c), 2);
        let mut counts = [0usize; 3];
        assert_eq!(cech_complex_face_counts(c, counts.as_mut_ptr(), 3), CechStatus::Ok);
        assert_eq!(counts, [4, 4, 0]);
        let mut betti = [0usize; 3];
        assert_eq!(cech_complex_betti(c, 2, betti.as_mut_ptr(), 3), CechStatus::Ok);
        assert_eq!(betti, [1, 1, 0]);
        assert_eq!(cech_complex_betti(c, 3, betti.as_mut_ptr(), 3), CechStatus::Ok);
        assert_eq!(betti, [1, 1, 0]);
        cech_complex_free(c);
        cech_sample_free(s);
    }
}

#[test]
fn ring_hole_matches_vacancy() {
    let m = 10;
    let coords: Vec<f64> = (0..m)
        .flat_map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
            [2.0 * t.cos(), 2.0 * t.sin()]
        })
        .collect();
    let s = sample(&coords, 2, 8.0);
    let mut c = ptr::null_mut();
    let (mut bounded, mut outer) = (0usize, 0usize);
    let mut betti = [0usize; 3];
    unsafe {
        assert_eq!(cech_complex_build(s, 0.7, 2, &mut c), CechStatus::Ok);
        assert_eq!(cech_complex_betti(c, 2, betti.as_mut_ptr(), 3), CechStatus::Ok);
        assert_eq!(cech_vacant_components(s, 0.7, 40.0, &mut bounded, &mut outer), CechStatus::Ok);
        cech_complex_free(c);
        cech_sample_free(s);
    }
    assert_eq!(betti[1], 1);
    assert_eq!((bounded, outer), (1, 1));
}

#[test]
fn poisson_is_reproducible() {
    let draw = |seed| unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(cech_sample_poisson(2.0, 2, 5.0, seed, &mut s), CechStatus::Ok);
        let n = cech_sample_len(s);
        assert_eq!(cech_sample_dim(s), 2);
        let mut buf = vec![0.0; n * 2];
        assert_eq!(cech_sample_coords(s, buf.as_mut_ptr(), buf.len()), CechStatus::Ok);
        cech_sample_free(s);
        buf
    };
    let a = draw(7);
    assert!(!a.is_empty());
    assert!(a.iter().all(|x| x.abs() <= 2.5));
    assert_eq!(a, draw(7));
    assert_ne!(a, draw(8));
}

#[test]
fn errors_set_codes_and_messages() {
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(cech_sample_poisson(1.0, 7, 5.0, 1, &mut s), CechStatus::InvalidArgument);
        assert!(last_error().contains("dimension 7"));
        assert_eq!(cech_sample_poisson(-1.0, 2, 5.0, 1, &mut s), CechStatus::InvalidArgument);
        assert!(s.is_null());

        let mut c = ptr::null_mut();
        assert_eq!(cech_complex_build(ptr::null(), 1.0, 2, &mut c), CechStatus::NullPointer);
        assert_eq!(last_error(), "sample is null");

        let s = sample(&[0.0, 0.0, 1.0, 0.0], 2, 4.0);
        assert_eq!(last_error(), "");
        assert_eq!(cech_complex_build(s, 1.0, 1, &mut c), CechStatus::Ok);
        let mut small = [0usize; 1];
        assert_eq!(cech_complex_face_counts(c, small.as_mut_ptr(), 1), CechStatus::BufferTooSmall);
        assert_eq!(cech_complex_betti(c, 4, small.as_mut_ptr(), 1), CechStatus::InvalidArgument);
        let (mut b, mut t) = (0, 0);
        assert_eq!(cech_vacant_components(s, 1.0, 2.0, &mut b, &mut t), CechStatus::InvalidArgument);
        cech_complex_free(c);
        cech_sample_free(s);
    }
}

#[test]
fn empty_sample_and_null_handles() {
    let mut s = ptr::null_mut();
    let (mut b, mut t) = (9, 9);
    unsafe {
        assert_eq!(cech_sample_from_coords(ptr::null(), 0, 2, 3.0, &mut s), CechStatus::Ok);
        assert_eq!(cech_sample_len(s), 0);
        assert_eq!(cech_vacant_components(s, 0.5, 16.0, &mut b, &mut t), CechStatus::Ok);
        assert_eq!((b, t), (0, 1));
        cech_sample_free(s);
        cech_sample_free(ptr::null_mut());
        cech_complex_free(ptr::null_mut());
        assert_eq!(cech_sample_len(ptr::null()), 0);
        assert_eq!(cech_complex_k_cap(ptr::null()), 0);
    }
}

#[test]
fn short_error_buffer_is_truncated() {
    let mut s = ptr::null_mut();
    unsafe {
        cech_sample_poisson(1.0, 0, 5.0, 1, &mut s);
        let full = cech_last_error(ptr::null_mut(), 0);
        let mut buf = [1 as c_char; 5];
        assert_eq!(cech_last_error(buf.as_mut_ptr(), 5), full);
        assert_eq!(buf[4], 0);
        assert_eq!(CStr::from_ptr(buf.as_ptr()).to_bytes().len(), 4);
    }
}
