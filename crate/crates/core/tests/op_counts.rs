use resolvent_quad::cg_variants::CollinearShiftScalars;
use resolvent_quad::opcount::{Counted, OpCounts};
use resolvent_quad::shifted_lanczos::ShiftState;
use resolvent_quad::{ShiftStatus, C64};

fn c(re: f64, im: f64) -> Counted {
    Counted(C64::new(re, im))
}

#[test]
fn lanczos_shift_update() {
    let mut st = ShiftState::<Counted>::init(C64::new(0.5, 1.0), 2.0, -0.2);
    for k in 0..5 {
        let ops = Counted::measure(|| st.update(c(0.1 * k as f64, 0.0), c(0.3, 0.0)));
        assert_eq!(
            ops,
            OpCounts {
                add: 3,
                mul: 4,
                div: 1
            },
            "step {k}"
        );
    }
}

#[test]
fn cocg_shift_update() {
    let mut cell = CollinearShiftScalars::<Counted>::new(C64::new(0.2, 0.7), C64::new(1.0, 0.0));
    let seed = c(0.0, 1.0);
    let ops = Counted::measure(|| {
        cell.cocg_update(
            c(0.8, 0.1),
            c(0.3, -0.1),
            c(1.1, 0.2),
            c(0.4, 0.0),
            c(0.5, 0.5),
            seed,
        )
    });
    assert_eq!(
        ops,
        OpCounts {
            add: 6,
            mul: 9,
            div: 3
        }
    );
    assert_eq!(ops.total(), 18);
}

#[test]
fn cocr_shift_update() {
    let mut cell = CollinearShiftScalars::<Counted>::new(C64::new(0.2, 0.7), C64::new(0.0, 0.0));
    let seed = c(0.0, 1.0);
    let ops = Counted::measure(|| {
        cell.cocr_update(c(0.2, 0.0), c(0.8, 0.1), c(0.3, -0.1), c(0.5, 0.5), seed)
    });
    assert_eq!(
        ops,
        OpCounts {
            add: 6,
            mul: 8,
            div: 3
        }
    );
    assert_eq!(ops.total(), 17);
}

#[test]
fn inactive_cells_cost_nothing() {
    let mut cell = CollinearShiftScalars::<Counted>::new(C64::new(-1.0, 1.0), C64::new(1.0, 0.0));
    let seed = c(0.0, 1.0);
    // alpha * (z - seed) = -1 with gamma = 0 makes pi_1 vanish.
    cell.cocg_update(
        c(1.0, 0.0),
        c(0.0, 0.0),
        c(1.0, 0.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
        seed,
    );
    assert_eq!(cell.status(), ShiftStatus::PiZero);
    let ops = Counted::measure(|| {
        cell.cocg_update(
            c(1.0, 0.0),
            c(1.0, 0.0),
            c(1.0, 0.0),
            c(1.0, 0.0),
            c(1.0, 0.0),
            seed,
        )
    });
    assert_eq!(ops.total(), 0);
}
