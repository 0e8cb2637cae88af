mod common;

use std::io::Cursor;

use cornerdc::blockdct::{coeff_grid_to_image, image_to_coeff_grid_padded};
use cornerdc::jpegstream::{compression_ratio, decode_baseline, drop_dc, encode_baseline};
use cornerdc::{CoeffBlock, CoeffGrid, Image, QuantTable};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use zune_jpeg::JpegDecoder;

/// Decodes with zune-jpeg and returns the luma plane.
fn zune_decode(bytes: &[u8]) -> (usize, usize, Vec<u8>) {
    let mut dec = JpegDecoder::new(Cursor::new(bytes.to_vec()));
    let pixels = dec.decode().expect("zune-jpeg rejected the stream");
    let info = dec.info().unwrap();
    let (w, h) = (info.width as usize, info.height as usize);
    let channels = pixels.len() / (w * h);
    (w, h, pixels.iter().step_by(channels).copied().collect())
}

fn random_grid(rng: &mut StdRng, rows: usize, cols: usize) -> CoeffGrid {
    let blocks = (0..rows * cols)
        .map(|_| {
            CoeffBlock(std::array::from_fn(|i| match i {
                0 => rng.random_range(-64..=64),
                1..=9 => rng.random_range(-30..=30),
                _ if rng.random_bool(0.15) => rng.random_range(-8..=8),
                _ => 0,
            }))
        })
        .collect();
    CoeffGrid::from_blocks(cols * 8, rows * 8, QuantTable::q50(), blocks).unwrap()
}

#[test]
fn photos_decode_in_zune_jpeg() {
    for (id, img) in common::photos() {
        let grid = image_to_coeff_grid_padded(&img, &QuantTable::q50()).unwrap();
        let ours = coeff_grid_to_image(&grid);
        let (w, h, theirs) = zune_decode(encode_baseline(&grid).unwrap().bytes());
        assert_eq!((w, h), (img.width(), img.height()), "{id}");
        // integer IDCTs differ from the float one by a grey level or two
        let worst = ours.data().iter().zip(&theirs).map(|(&a, &b)| a.abs_diff(b)).max().unwrap();
        assert!(worst <= 3, "{id}: max difference {worst}");
    }
}

#[test]
fn dropped_streams_are_still_valid_jpeg() {
    let (_, img) = &common::photos()[0];
    let grid = drop_dc(&image_to_coeff_grid_padded(img, &QuantTable::q50()).unwrap());
    let (w, h, _) = zune_decode(encode_baseline(&grid).unwrap().bytes());
    assert_eq!((w, h), (img.width(), img.height()));
}

#[test]
fn unaligned_images_round_trip_through_both_decoders() {
    let img = Image::from_fn(37, 21, |x, y| ((x * 9 + y * 5) % 256) as u8);
    let grid = image_to_coeff_grid_padded(&img, &QuantTable::q50()).unwrap();
    let bytes = encode_baseline(&grid).unwrap();
    let back = decode_baseline(bytes.bytes()).unwrap();
    assert_eq!(back, grid);
    assert_eq!(coeff_grid_to_image(&back).width(), 37);
    let (w, h, _) = zune_decode(bytes.bytes());
    assert_eq!((w, h), (37, 21));
}

#[test]
fn random_grids_round_trip() {
    let mut rng = StdRng::seed_from_u64(2024);
    for _ in 0..25 {
        let (rows, cols) = (rng.random_range(1..=12), rng.random_range(1..=12));
        let grid = random_grid(&mut rng, rows, cols);
        let enc = encode_baseline(&grid).unwrap();
        assert_eq!(decode_baseline(enc.bytes()).unwrap(), grid);
        let dropped = encode_baseline(&drop_dc(&grid)).unwrap();
        assert_eq!(decode_baseline(dropped.bytes()).unwrap(), drop_dc(&grid));
        let r = compression_ratio(&enc, &dropped);
        assert!(r.total > 0.0 && r.scan > 0.0);
    }
}
