use octic_core::arrangement::FamilyArrangement;
use octic_core::counting::{count, octic_forms_mod_p, CountTask};
use octic_core::gf::FieldSpec;
use octic_core::multipoly::Rational;
use num_bigint::BigInt;

fn main() {
    let field = FieldSpec::extension(7, 3).unwrap();
    let fam = FamilyArrangement::paper_octic();
    let forms = octic_forms_mod_p(&fam, &Rational::from_integer(BigInt::from(7)), &field).unwrap();
    let task = CountTask::double_cover(forms).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let start = std::time::Instant::now();
    let r = pool.install(|| count(&task).unwrap());
    println!("N = {} over F_343 in {:?}", r.n, start.elapsed());
}
