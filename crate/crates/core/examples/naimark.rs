//! POVMs, their Naimark dilations, and coherent-state quantization.

use opalg::povm::{coherent_quantize, Frame, Povm};
use opalg::{Tolerances, C64};

fn main() -> opalg::Result<()> {
    let tol = Tolerances::default();

    let trine = Povm::trine();
    let n = trine.naimark(&tol)?;
    println!(
        "trine: {} effects on C^2, dilated to a PVM on C^{} (is PVM: {}), residual {:.1e}",
        trine.len(),
        n.pvm.dim(),
        n.pvm.validate(&tol).is_pvm,
        n.residual
    );

    let basis = Povm::standard_basis(3);
    println!("a PVM dilates to dimension {}", basis.naimark(&tol)?.pvm.dim());

    // Quantize a function on the six octahedral points of the Bloch sphere.
    let frame = Frame::octahedral();
    let f: Vec<C64> = [1.0, -1.0, 0.5, -0.5, 2.0, -2.0].map(|x| C64::new(x, 0.0)).to_vec();
    let cq = coherent_quantize(&frame, &f, &tol)?;
    println!("frame resolution residual {:.1e}", frame.resolution_residual());
    println!("quantized operator:\n{}", cq.qf);
    Ok(())
}
