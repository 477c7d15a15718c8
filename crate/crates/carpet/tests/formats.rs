use carpet::formats::{encode_png, encode_ppm, write_image, write_orbit_csv, TreeFile};
use carpet_core::family::Orbit;
use carpet_core::render::{BasinGrid, Cell, Classification, ImageBuffer, Palette};
use carpet_core::trees::{builtin_tree, TreeKind};
use carpet_core::{Complex, SpherePoint};

fn grid(classes: &[Classification]) -> BasinGrid {
    let cells = classes.iter().map(|&class| Cell { class, time: 0 }).collect();
    BasinGrid::new(classes.len(), 1, cells).unwrap()
}

#[test]
fn single_undecided_pixel_is_black() {
    let img = ImageBuffer::from_grid(&grid(&[Classification::Undecided]), &Palette::default());
    let mut want = b"P6\n1 1\n255\n".to_vec();
    want.extend_from_slice(&[0, 0, 0]);
    assert_eq!(encode_ppm(&img), want);
}

#[test]
fn two_basins_in_row_major_order() {
    let p = Palette::default();
    let img = ImageBuffer::from_grid(&grid(&[Classification::Basin(0), Classification::Basin(1)]), &p);
    let mut want = b"P6\n2 1\n255\n".to_vec();
    want.extend_from_slice(&p.base[0]);
    want.extend_from_slice(&p.base[1]);
    assert_eq!(encode_ppm(&img), want);
}

#[test]
fn png_decodes_to_the_same_pixels() {
    let rgb: Vec<u8> = (0..5 * 3 * 3).map(|k| (k * 17 % 256) as u8).collect();
    let img = ImageBuffer { width: 5, height: 3, rgb };
    let bytes = encode_png(&img).unwrap();
    let decoder = png::Decoder::new(std::io::Cursor::new(bytes));
    let mut reader = decoder.read_info().unwrap();
    let mut buf = vec![0; reader.output_buffer_size().unwrap()];
    let info = reader.next_frame(&mut buf).unwrap();
    assert_eq!((info.width, info.height), (5, 3));
    assert_eq!(&buf[..info.buffer_size()], &img.rgb[..]);
}

#[test]
fn image_files_are_byte_identical_across_writes() {
    let dir = tempfile::tempdir().unwrap();
    let img = ImageBuffer { width: 2, height: 2, rgb: (0..12).collect() };
    for name in ["a.ppm", "a.png"] {
        let path = dir.path().join(name);
        write_image(&img, &path).unwrap();
        let first = std::fs::read(&path).unwrap();
        write_image(&img, &path).unwrap();
        assert_eq!(first, std::fs::read(&path).unwrap(), "{name}");
    }
    assert!(std::fs::read(dir.path().join("a.png")).unwrap().starts_with(b"\x89PNG"));
}

#[test]
fn orbit_csv_columns() {
    let orbit = Orbit {
        points: vec![SpherePoint::ZERO, SpherePoint::new(Complex::new(0.5, -0.25)), SpherePoint::INFINITY],
        degenerate: false,
    };
    let mut out = Vec::new();
    write_orbit_csv(&orbit, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text, "step,re,im,chart\n0,0.0,0.0,standard\n1,0.5,-0.25,standard\n2,0.0,0.0,inverted\n");
}

#[test]
fn tree_json_round_trip() {
    let tree = builtin_tree(TreeKind::HP, &[1, 2, 2, 1]).unwrap();
    let file = TreeFile::from_tree(&tree);
    let text = file.to_json();
    assert_eq!(text, r#"{"edges":4,"images":[[1],[2],[0,3],[0,1]],"weights":[1,2,2,1]}"#);
    assert_eq!(TreeFile::from_json(&text).unwrap().into_tree().unwrap(), tree);
}

#[test]
fn malformed_tree_json_is_rejected() {
    let wrong_count = r#"{"edges":3,"images":[[1],[0]],"weights":[1,1]}"#;
    assert!(TreeFile::from_json(wrong_count).unwrap().into_tree().is_err());
    let unknown_key = r#"{"edges":1,"images":[[0]],"weights":[1],"name":"x"}"#;
    assert!(TreeFile::from_json(unknown_key).is_err());
    let bad_edge = r#"{"edges":1,"images":[[4]],"weights":[1]}"#;
    assert!(TreeFile::from_json(bad_edge).unwrap().into_tree().is_err());
}
