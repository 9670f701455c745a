use fibmachine::chain::ProbSeq;
use fibmachine::figures::panel;
use fibmachine::render::*;
use fibmachine::spectrum::EscapeConfig;

#[test]
fn all_ones_gives_the_unit_disk() {
    let grid = GridSpec::square(4.0, 101);
    let p = ProbSeq::all_ones();
    let cfg = EscapeConfig::for_seq(&p, 30).unwrap();
    let buf = scan_grid(&grid, &p, &cfg).unwrap();
    let mut compared = 0;
    for j in 0..101 {
        for i in 0..101 {
            let r = grid.point(i, j).norm();
            if (r - 1.0).abs() > 2.0 / 101.0 {
                assert_eq!(
                    buf.is_inside(i, j),
                    r < 1.0,
                    "pixel ({i}, {j}) at radius {r}"
                );
                compared += 1;
            }
        }
    }
    assert!(compared > 9000);
}

#[test]
fn panel_seven_is_smaller_than_the_disk() {
    let cfg = panel(7).unwrap().config().unwrap();
    let mut grid = cfg.grid;
    grid.pixels_x = 121;
    grid.pixels_y = 121;
    let esc = cfg.escape_config().unwrap();
    let fragmented = scan_grid(&grid, &cfg.prob_seq, &esc)
        .unwrap()
        .inside_count();
    let ones = ProbSeq::all_ones();
    let disk = scan_grid(
        &grid,
        &ones,
        &EscapeConfig::for_seq(&ones, esc.max_level).unwrap(),
    )
    .unwrap()
    .inside_count();
    assert!(fragmented > 0);
    assert!(fragmented < disk, "{fragmented} vs {disk}");
}

#[test]
fn conjugation_symmetry() {
    for id in [1, 7, 12] {
        let cfg = panel(id).unwrap().config().unwrap();
        let mut grid = cfg.grid;
        grid.pixels_x = 80;
        grid.pixels_y = 81;
        let buf = scan_grid(&grid, &cfg.prob_seq, &cfg.escape_config().unwrap()).unwrap();
        for j in 0..grid.pixels_y {
            for i in 0..grid.pixels_x {
                assert_eq!(buf.get(i, j), buf.get(i, grid.pixels_y - 1 - j));
            }
        }
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let cfg = panel(11).unwrap().config().unwrap();
    let mut grid = cfg.grid;
    grid.pixels_x = 97;
    grid.pixels_y = 64;
    let esc = cfg.escape_config().unwrap();
    let reference = scan_grid_sequential(&grid, &cfg.prob_seq, &esc).unwrap();
    for threads in [1, 2, 4, 7] {
        let buf = scan_grid_with_threads(&grid, &cfg.prob_seq, &esc, threads).unwrap();
        assert_eq!(buf, reference, "{threads} workers");
    }
    let palette = Palette::default();
    let (mut a, mut b) = (Vec::new(), Vec::new());
    write_ppm(&reference, &palette, &mut a).unwrap();
    write_ppm(
        &scan_grid(&grid, &cfg.prob_seq, &esc).unwrap(),
        &palette,
        &mut b,
    )
    .unwrap();
    assert_eq!(a, b);
}

#[test]
fn deeper_scans_only_remove_inside_cells() {
    let cfg = panel(4).unwrap().config().unwrap();
    let mut grid = cfg.grid;
    grid.pixels_x = 90;
    grid.pixels_y = 90;
    let mut previous: Option<IterBuffer> = None;
    for max_level in [4, 8, 12, 17, 25] {
        let mut esc = cfg.escape_config().unwrap();
        esc.max_level = max_level;
        let buf = scan_grid(&grid, &cfg.prob_seq, &esc).unwrap();
        if let Some(prev) = &previous {
            for (old, new) in prev.cells.iter().zip(&buf.cells) {
                if *old != IterBuffer::INSIDE {
                    assert_eq!(old, new);
                }
            }
            assert!(buf.inside_count() <= prev.inside_count());
        }
        previous = Some(buf);
    }
}

#[test]
fn golden_two_pixel_ppm() {
    let mut buf = IterBuffer::new(2, 1);
    buf.set(1, 0, 3);
    let mut out = Vec::new();
    write_ppm(&buf, &Palette::default(), &mut out).unwrap();
    assert_eq!(out, include_bytes!("golden/two_by_one.ppm"));
}

#[test]
fn csv_round_trip_of_a_scan() {
    let cfg = panel(2).unwrap().config().unwrap();
    let mut grid = cfg.grid;
    grid.pixels_x = 13;
    grid.pixels_y = 9;
    let buf = scan_grid(&grid, &cfg.prob_seq, &cfg.escape_config().unwrap()).unwrap();
    let mut text = Vec::new();
    write_csv(&buf, &mut text).unwrap();
    assert_eq!(read_csv(text.as_slice()).unwrap(), buf);
}
