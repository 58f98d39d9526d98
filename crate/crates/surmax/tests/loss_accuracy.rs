//! Closed-form and finite-difference checks for the surrogate losses.

use rand::Rng;
use surmax::{eval_obs_loss, LossKind, LossSpec};

/// Reference values computed with mpmath at 120 decimal digits, evaluated at
/// the exact binary f64 inputs listed here.
const ORACLE: &[(&str, f64, f64, f64, f64, f64)] = &[
    ("logistic", 1.0, -30.0, -30.000000000000093576, 0.99999999999990642377, -9.3576229688384233028e-14),
    ("logistic", 1.0, -8.5, -8.5002034476721294431, 0.99979657302194479348, -0.00020338559551980584392),
    ("logistic", 1.0, -5.0, -5.0067153484891180686, 0.99330714907571514444, -0.0066480566707901549140),
    ("logistic", 1.0, -1.0, -1.3132616875182228340, 0.73105857863000487925, -0.19661193324148185254),
    ("logistic", 1.0, -0.5, -0.97407698418010668087, 0.62245933120185456464, -0.23500371220159448907),
    ("logistic", 1.0, 0.3, -0.55435524446852712354, 0.42555748318834101556, -0.24445831169074586947),
    ("logistic", 1.0, 0.7, -0.40318604888545790793, 0.33181222783183390332, -0.22171287329310905372),
    ("logistic", 1.0, 3.0, -0.048587351573742058759, 0.047425873177566780879, -0.045176659730912132649),
    ("logistic", 1.0, 17.0, -4.1399376330897474477e-8, 4.1399375473943306009e-8, -4.1399373760035016377e-8),
    ("logistic", 1.0, 30.0, -9.3576229688397367794e-14, 9.3576229688392989538e-14, -9.3576229688384233028e-14),
    ("logistic", 0.7, -30.0, -30.000000001083222918, 0.99999999924174395778, -5.3077922914890102834e-10),
    ("logistic", 0.7, -8.5, -8.5037177874324838819, 0.99740093223767665186, -0.0018146188263631396381),
    ("logistic", 0.7, -1.0, -1.5759800698363684764, 0.66818777216816609668, -0.15519901130517632776),
    ("logistic", 0.7, 0.3, -0.84807083003111968259, 0.44769209042567473487, -0.17308471781717493690),
    ("logistic", 0.7, 3.0, -0.16502789025679283930, 0.10909682119561295125, -0.068036293360437781252),
    ("logistic", 0.7, 30.0, -1.0832229178624508829e-9, 7.5825604221623945700e-10, -5.3077922914890102834e-10),
    ("logistic", 1.0, -800.0, -800.0, 1.0, -3.6678745841776872135e-348),
    ("huber", 2.0, -30.0, -60.066592756745816542, 1.9977851578566089560, -0.00014716595248622550974),
    ("huber", 2.0, -5.0, -10.385164807134504031, 1.9284766908852593157, -0.025613150093386463882),
    ("huber", 2.0, -0.5, -2.5615528128088302749, 1.2425356250363329735, -0.45653764712721500898),
    ("huber", 2.0, 0.3, -1.7223748416156684474, 0.85165954706975537667, -0.48358745861530441422),
    ("huber", 2.0, 3.0, -0.60555127546398929312, 0.16794970566215631697, -0.085338491726958326464),
    ("huber", 2.0, 30.0, -0.066592756745816541758, 0.0022148421433910439682, -0.00014716595248622550974),
    ("huber", 0.5, -30.0, -60.004166377354995596, 1.9998611400395999643, -9.2554025737258165725e-6),
    ("huber", 0.5, -5.0, -10.024937810560445135, 1.9950371902099891357, -0.0019703706736831468033),
    ("huber", 0.5, 0.3, -0.28309518948453005248, 0.48550424457247350186, -1.2610190084008003119),
    ("huber", 0.5, 30.0, -0.0041663773549955963316, 0.00013885996040003566793, -9.2554025737258165725e-6),
    ("probit", 0.5, -30.0, -116.13138484571169524, 7.5330434135839110175, -0.24891746906061002657),
    ("probit", 0.5, -17.0, -39.197396428217669289, 4.3072976600825864371, -0.24679807720193197672),
    ("probit", 0.5, -16.1, -35.420737727716232320, 4.0853279800038049926, -0.24645958468665313871),
    ("probit", 0.5, -16.0, -35.013437159914549896, 4.0606840561180563403, -0.24641877913916477246),
    ("probit", 0.5, -15.9, -34.608600779328582283, 4.0360442472035570045, -0.24637728275078771151),
    ("probit", 0.5, -8.5, -11.446339749365847058, 2.2322365846331003255, -0.23937742742911028066),
    ("probit", 0.5, -5.0, -5.0816482772786904984, 1.4113723988319536252, -0.22775654964472113930),
    ("probit", 0.5, -1.0, -1.1759117615936186089, 0.57053888518403224044, -0.18287989821103026345),
    ("probit", 0.5, 0.3, -0.58050142058936968667, 0.35245430611484470171, -0.15065811085751000694),
    ("probit", 0.5, 4.0, -0.023012909328963488465, 0.027623931339494979551, -0.028387012922144112446),
    ("probit", 0.5, 12.0, -9.8658764552437573169e-10, 3.0379414279088382226e-9, -9.1138242929556027873e-9),
    ("probit", 0.5, 30.0, -3.6709661993127508858e-51, 2.7653547749222080796e-50, -2.0740160811916560597e-49),
    ("probit", 1.0, -30.0, -454.32124395634319711, 30.033259667433677037, -0.99889622848810990900),
    ("probit", 1.0, -17.0, -148.25558265098038988, 17.058423314512999310, -0.99660963039967311098),
    ("probit", 1.0, -9.0, -43.628149113332115497, 9.1085231050028687978, -0.98848520934528286672),
    ("probit", 1.0, -8.0, -35.013437159914549896, 8.1213681122361126807, -0.98567511655665908982),
    ("probit", 1.0, -7.9, -34.206228170981715976, 8.0228172462087806185, -0.98534032101567227290),
    ("probit", 1.0, -5.0, -15.064998393988725736, 5.1865039671258421156, -0.96730356538288777465),
    ("probit", 1.0, -5.1, -15.588487091871465665, 5.2832876169091570201, -0.96836119674894058172),
    ("probit", 1.0, -4.9, -14.551182689355312642, 5.0898286001298836334, -0.9661950380636992518),
    ("probit", 1.0, -6.0, -20.736768949974705655, 6.1584826045445989173, -0.97601236321083322905),
    ("probit", 0.5, -10.2, -15.588487091871465665, 2.64164380845457851, -0.24209029918723514543),
    ("probit", 0.5, -9.8, -14.551182689355312642, 2.5449143000649418167, -0.24154875951592481295),
    ("probit", 0.5, -11.0, -17.779376352625260511, 2.8357051569486528114, -0.24303455553638844256),
    ("probit", 1.0, -2.1, -4.024944222243984438, 2.462077951298108776, -0.89146414054226384152),
    ("probit", 1.0, -2.0, -3.7831843336820319488, 2.3732155328228408673, -0.88572089958591874336),
    ("probit", 1.0, -1.9, -3.5502813255421345827, 2.2849469154767392032, -0.87958326714086048532),
    ("probit", 1.0, -3.2, -7.2829755029036313263, 3.4695918678220531915, -0.93537375222635299566),
    ("probit", 0.5, -4.2, -4.024944222243984438, 1.231038975649054388, -0.22286603513556596038),
    ("probit", 0.5, -3.8, -3.5502813255421345827, 1.1424734577383696016, -0.21989581678521512133),
    ("probit", 1.0, 2.9, -0.0018675560981809216533, 0.0059636594949805516159, -0.017330177770015670844),
    ("probit", 1.0, 3.1, -0.00096807164340154974293, 0.0032699831023569298683, -0.010147640406796182734),
    ("probit", 1.0, 4.5, -3.3976788968344661445e-6, 0.000015983795414617585864, -0.000071927334847494992739),
    ("probit", 1.0, 5.0, -2.8665161296376359338e-7, 1.4867199409049057124e-6, -7.4336019148607112465e-6),
    ("probit", 1.0, 6.5, -4.0160005839397591118e-11, 2.6695566148700613259e-10, -1.7352117997368051871e-9),
    ("probit", 0.5, 9.0, -3.3976788968344661445e-6, 7.9918977073087929321e-6, -0.000017981833711873748185),
    ("probit", 1.0, -1.0, -1.8410216450092635058, 1.5251352761609812091, -0.80090233442965120845),
    ("probit", 1.0, 0.3, -0.48141016158848120517, 0.61722085361273445015, -0.56612783821825289754),
    ("probit", 1.0, 4.0, -0.00003167174337748926386, 0.00013383446446857514211, -0.00053535576953818015875),
    ("probit", 1.0, 30.0, -4.9067139271481870595e-198, 1.473646134878547519e-196, -4.4209384046356425571e-195),
];

fn spec_of(name: &str, a: f64) -> LossSpec {
    let kind = match name {
        "logistic" => LossKind::Logistic,
        "huber" => LossKind::PseudoHuber,
        "probit" => LossKind::Probit,
        other => panic!("unknown kind {other}"),
    };
    LossSpec::new(kind, a).unwrap()
}

fn check(label: &str, got: f64, want: f64, rel_tol: f64) {
    if want.abs() < 1e-300 {
        // Below this the reference itself is sub-representable; only require
        // agreement in magnitude class and sign.
        assert!(got.abs() <= 1e-300, "{label}: got {got}, want ~{want}");
        assert!(got <= 0.0 || want >= 0.0, "{label}: sign mismatch");
        return;
    }
    let rel = (got - want).abs() / want.abs();
    assert!(rel <= rel_tol, "{label}: got {got:e}, want {want:e}, rel {rel:e}");
}

#[test]
fn matches_high_precision_reference_to_1e12() {
    for &(name, a, u, v, d1, d2) in ORACLE {
        let e = spec_of(name, a).eval(u);
        let label = format!("{name} a={a} u={u}");
        check(&format!("{label} value"), e.value, v, 1e-12);
        check(&format!("{label} d1"), e.d1, d1, 1e-12);
        check(&format!("{label} d2"), e.d2, d2, 1e-12);
    }
}

fn all_specs() -> Vec<LossSpec> {
    let mut out = Vec::new();
    for kind in [LossKind::Logistic, LossKind::PseudoHuber, LossKind::Probit] {
        out.push(LossSpec::with_default_scale(kind));
        out.push(LossSpec::new(kind, 0.8).unwrap());
        out.push(LossSpec::new(kind, 2.5).unwrap());
    }
    out
}

/// Analytic first derivative vs central differences of the value, and
/// analytic second derivative vs central differences of the first: 1000
/// random points per spec, |u| up to 50.
#[test]
fn derivatives_match_finite_differences() {
    let mut rng = surmax::seed::stream(0x10556f01);
    for spec in all_specs() {
        for _ in 0..1000 {
            let u: f64 = rng.random_range(-50.0..50.0);
            let h = 1e-6 * (1.0 + u.abs());
            let up = spec.eval(u + h);
            let dn = spec.eval(u - h);
            let mid = spec.eval(u);
            let fd1 = (up.value - dn.value) / (2.0 * h);
            let fd2 = (up.d1 - dn.d1) / (2.0 * h);
            let e1 = (mid.d1 - fd1).abs() / (1.0 + mid.d1.abs());
            let e2 = (mid.d2 - fd2).abs() / (1.0 + mid.d2.abs());
            assert!(e1 <= 1e-6, "{spec:?} u={u}: d1={} fd={fd1} err={e1}", mid.d1);
            assert!(e2 <= 1e-4, "{spec:?} u={u}: d2={} fd={fd2} err={e2}", mid.d2);
        }
    }
}

/// Per-observation score matches central finite differences of the loss in b.
#[test]
fn obs_score_and_hessian_match_finite_differences() {
    let mut rng = surmax::seed::stream(0x10556f02);
    for trial in 0..1000 {
        let spec = all_specs()[trial % 9];
        let d = 1 + trial % 4;
        let y = (trial % 2) as u8;
        let x: Vec<f64> = (0..d).map(|_| rng.random_range(-3.0..3.0)).collect();
        let b: Vec<f64> = (0..d).map(|_| rng.random_range(-4.0..4.0)).collect();
        let (_, score, hess) = eval_obs_loss(&spec, y, &x, &b).unwrap();

        let mut fd_score = vec![0.0; d];
        let mut fd_hess = vec![vec![0.0; d]; d];
        for j in 0..d {
            let h = 1e-6 * (1.0 + b[j].abs());
            let mut bp = b.clone();
            let mut bm = b.clone();
            bp[j] += h;
            bm[j] -= h;
            let (lp, sp, _) = eval_obs_loss(&spec, y, &x, &bp).unwrap();
            let (lm, sm, _) = eval_obs_loss(&spec, y, &x, &bm).unwrap();
            fd_score[j] = (lp - lm) / (2.0 * h);
            for k in 0..d {
                fd_hess[j][k] = (sp[k] - sm[k]) / (2.0 * h);
            }
        }
        let snorm: f64 = score.iter().map(|s| s * s).sum::<f64>().sqrt();
        let gerr: f64 = score
            .iter()
            .zip(&fd_score)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
            / (1.0 + snorm);
        assert!(gerr <= 1e-6, "{spec:?} y={y} x={x:?} b={b:?}: grad err {gerr}");
        for j in 0..d {
            for k in 0..d {
                let herr = (hess[j][k] - fd_hess[j][k]).abs() / (1.0 + hess[j][k].abs());
                assert!(herr <= 1e-4, "{spec:?}: hess[{j}][{k}] err {herr}");
            }
        }
    }
}

/// The probit example from the operation contract: score vs finite
/// differences at a fixed point.
#[test]
fn probit_example_point() {
    let spec = LossSpec::new(LossKind::Probit, 0.5).unwrap();
    let x = [2.0, -1.0];
    let b = [0.3, 0.7];
    let (_, score, _) = eval_obs_loss(&spec, 1, &x, &b).unwrap();
    for j in 0..2 {
        let h = 1e-6;
        let mut bp = b;
        let mut bm = b;
        bp[j] += h;
        bm[j] -= h;
        let (lp, _, _) = eval_obs_loss(&spec, 1, &x, &bp).unwrap();
        let (lm, _, _) = eval_obs_loss(&spec, 1, &x, &bm).unwrap();
        let fd = (lp - lm) / (2.0 * h);
        assert!(
            (score[j] - fd).abs() / (1.0 + score[j].abs()) <= 1e-6,
            "coordinate {j}: {} vs {fd}",
            score[j]
        );
    }
}
