// The minimal unitary dilation `Ŵ` on `(𝒟⊗H²) ⊕ ℋ ⊕ (𝒟_*⊗H²)`: it is an isometry where the
// truncation is honest, compresses to powers of `T`, and `φ(Ŵ)` compresses to `φ(T)`.

use homcharfun::blockops::weighted_shift;
use homcharfun::dilation::{build_dilation, check_dilation};
use homcharfun::linalg::cplx;
use homcharfun::MobiusMap;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let t = weighted_shift(2.0, 20).orthonormal();
    let w = build_dilation(&t, 12)?;
    println!("dilation space has {} dimensions (base at offset {})", w.dim(), w.base_offset());

    let maps = [MobiusMap::rotation(cplx(0.0, 1.0)), MobiusMap::involution_at(cplx(0.3, 0.0))?];
    let r = check_dilation(&w, 4, &maps)?;
    println!("isometry defect {:.2e}", r.isometry);
    println!("max ‖P Ŵᵏ P − Tᵏ‖ for k ≤ 4: {:.2e}", r.power_compression);
    println!("max ‖P φ(Ŵ) P − φ(T)‖: {:.2e}", r.mobius_blocks);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("unitary_dilation example");
}
