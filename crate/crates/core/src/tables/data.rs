//! Built-in rows.

use super::{CharConstraint, FixExpectation, GeneratorSpec, ParamRange, Parity, TableRow, TypeTemplate};

const XYZ: [&str; 3] = ["x", "y", "z"];
const XY: [&str; 2] = ["x", "y"];

fn ty(s: &str) -> TypeTemplate {
    // `D:2*m+2:2*max(0,2-m)` or `Smooth`
    let mut parts = s.splitn(3, ':');
    let family = parts.next().unwrap_or_default();
    if family == "Smooth" {
        return TypeTemplate::smooth();
    }
    TypeTemplate::new(family, parts.next().unwrap_or_default(), parts.next())
}

struct Row(TableRow);

impl Row {
    fn new(table: u8, row: u8, chars: CharConstraint, source: &str, target: &str, fix: FixExpectation) -> Row {
        Row(TableRow {
            table,
            row,
            chars,
            params: Vec::new(),
            vars: XYZ.iter().map(|s| s.to_string()).collect(),
            equation: None,
            power: None,
            w_def: None,
            derivation: Vec::new(),
            second_derivation: None,
            h: None,
            source: ty(source),
            target: ty(target),
            base: None,
            generators: GeneratorSpec::Search,
            w: None,
            l: None,
            g: None,
            rho_checked: false,
            fix,
            approx: false,
            trunc: "24".into(),
        })
    }

    fn plane(mut self) -> Row {
        self.0.vars = XY.iter().map(|s| s.to_string()).collect();
        self
    }

    fn param(mut self, name: &str, min: i64) -> Row {
        self.0.params.push(ParamRange { name: name.into(), min, max: None, parity: None });
        self
    }

    fn param_parity(mut self, name: &str, min: i64, parity: Parity) -> Row {
        self.0.params.push(ParamRange { name: name.into(), min, max: None, parity: Some(parity) });
        self
    }

    fn eq(mut self, f: &str) -> Row {
        self.0.equation = Some(f.into());
        self
    }

    fn two_relations(mut self, power: &str, w_def: &str) -> Row {
        self.0.power = Some(power.into());
        self.0.w_def = Some(w_def.into());
        self.0.generators = GeneratorSpec::Frobenius;
        self.0.approx = true;
        self
    }

    fn der(mut self, images: &[&str]) -> Row {
        self.0.derivation = images.iter().map(|s| s.to_string()).collect();
        self
    }

    fn der2(mut self, images: &[&str]) -> Row {
        self.0.second_derivation = Some(images.iter().map(|s| s.to_string()).collect());
        self
    }

    fn h(mut self, h: &str) -> Row {
        self.0.h = Some(h.into());
        self
    }

    fn gens(mut self, gens: &[(&str, &str)]) -> Row {
        self.0.generators =
            GeneratorSpec::Listed { generators: gens.iter().map(|(n, g)| (n.to_string(), g.to_string())).collect() };
        self
    }

    fn w(mut self, w: &str) -> Row {
        self.0.w = Some(w.into());
        self
    }

    fn l(mut self, l: &str) -> Row {
        self.0.l = Some(l.into());
        self
    }

    fn action(mut self, base: &str, g: &[&str], rho_checked: bool) -> Row {
        self.0.base = Some(ty(base));
        self.0.g = Some(g.iter().map(|s| s.to_string()).collect());
        self.0.rho_checked = rho_checked;
        self
    }

    fn trunc(mut self, t: &str) -> Row {
        self.0.trunc = t.into();
        self
    }
}

fn table1() -> Vec<Row> {
    use CharConstraint::*;
    let fpf = FixExpectation::FixedPointFree;
    let new = |row, chars, b: &str, b1: &str| {
        Row::new(1, row, chars, b, b1, fpf).der(&["0", "0", "1"]).gens(&[("X", "x"), ("Y", "y"), ("Z", "z^{p}")])
    };
    vec![
        new(1, Any, "A:p-1", "Smooth").eq("x*y + z^{p}").trunc("max(24, 2*p+4)"),
        new(2, Any, "A:p*m-1", "A:m-1").param("m", 2).eq("x*y + z^{p*m}").trunc("max(24, p*m+p+4)"),
        new(3, Fixed { p: 5 }, "E:8:0", "Smooth").eq("z^5 + x^2 + y^3"),
        new(4, Fixed { p: 3 }, "E:6:0", "Smooth").eq("z^3 + x^2 + y^4"),
        new(5, Fixed { p: 3 }, "E:7:0", "A:1").eq("x^2 + y^3 + y*z^3"),
        new(6, Fixed { p: 3 }, "E:8:0", "Smooth").eq("z^3 + x^2 + y^5"),
        new(7, Fixed { p: 2 }, "D:2*m:0", "Smooth").param("m", 2).eq("z^2 + x^2*y + x*y^{m}").trunc("max(24, 4*m+8)"),
        new(8, Fixed { p: 2 }, "D:2*m+1:1", "A:1").param("m", 2).eq("x^2 + y*z^2 + x*y^{m}").trunc("max(24, 4*m+8)"),
        new(9, Fixed { p: 2 }, "E:6:0", "A:2").eq("x^2 + x*z^2 + y^3"),
        new(10, Fixed { p: 2 }, "E:7:0", "Smooth").eq("z^2 + x^3 + x*y^3"),
        new(11, Fixed { p: 2 }, "E:8:0", "Smooth").eq("z^2 + x^3 + y^5"),
    ]
}

fn table2() -> Vec<Row> {
    use CharConstraint::*;
    let mp = FixExpectation::MPrimary;
    let smooth = |row, chars, b1: &str| Row::new(2, row, chars, "Smooth", b1, mp).plane();
    let rdp = |row, chars, b: &str, b1: &str| {
        Row::new(2, row, chars, b, b1, mp).gens(&[("X", "x^{p}"), ("Y", "y^{p}"), ("Z", "z")])
    };
    vec![
        smooth(1, Any, "A:p-1").der(&["x", "-y"]).h("1"),
        rdp(2, Any, "A:m-1", "A:p*m-1")
            .param("m", 2)
            .eq("x*y + z^{m}")
            .der(&["x", "-y", "0"])
            .h("1")
            .trunc("max(24, p*m+p+4)"),
        smooth(3, Fixed { p: 5 }, "E:8:0").der(&["y^2", "x"]).h("0"),
        smooth(4, Fixed { p: 3 }, "E:6:0").der(&["y^3", "x"]).h("0"),
        rdp(5, Fixed { p: 3 }, "A:1", "E:7:0").eq("x^2 + y^3 + y*z").der(&["z", "x", "0"]).h("0").trunc("30"),
        smooth(6, Fixed { p: 3 }, "E:8:0").der(&["y^4", "-x"]).h("-y^3"),
        smooth(7, Fixed { p: 2 }, "D:2*m:0")
            .param("m", 2)
            .der(&["x^2 + {m}*x*y^{m-1}", "y^{m}"])
            .h("{m}*y^{m-1}")
            .trunc("max(24, 4*m+8)"),
        rdp(8, Fixed { p: 2 }, "A:1", "D:2*m+1:1")
            .param("m", 2)
            .eq("x^2 + y*z + x*y^{m}")
            .der(&["z + {m}*y^{m-1}*x", "y^{m}", "0"])
            .h("{m}*y^{m-1}")
            .trunc("max(24, 4*m+8)"),
        rdp(9, Fixed { p: 2 }, "A:2", "E:6:0").eq("x^2 + x*z + y^3").der(&["y^2", "z", "0"]).h("0"),
        smooth(10, Fixed { p: 2 }, "E:7:0").der(&["x*y^2", "x^2 + y^3"]).h("y^2"),
        smooth(11, Fixed { p: 2 }, "E:8:0").der(&["y^4", "x^2"]).h("0"),
    ]
}

fn table3() -> Vec<Row> {
    let mp = FixExpectation::MPrimary;
    let p3 = CharConstraint::Fixed { p: 3 };
    let p2 = CharConstraint::Fixed { p: 2 };
    let new = |row, chars, b: &str, b1: &str, power: &str, w_def: &str, d: &[&str], h: &str| {
        Row::new(3, row, chars, b, b1, mp).two_relations(power, w_def).der(d).h(h).trunc("30")
    };
    let dm = ["z + {m}*y^{m-1}*x", "y^{m}", "0"];
    let hm = "{m}*y^{m-1}";
    vec![
        new(1, p3.clone(), "E:6:2", "E:6:2", "z^2 + z*w", "y^2 + y*x", &["x - y", "-y", "0"], "1"),
        new(2, p3.clone(), "E:8:2", "E:6:0", "z^2 + y^3*w", "y^2 + y*x", &["x - y", "-y", "0"], "1"),
        new(3, p3.clone(), "E:6:0", "E:8:2", "z^2 + z*w", "y^2 + z*x", &["y", "z", "0"], "0"),
        new(4, p3, "E:8:0", "E:8:0", "z^2 + y^3*w", "y^2 + z*x", &["y", "z", "0"], "0"),
        new(5, p2.clone(), "D:2*mp+2:2*max(0,2-m)", "D:2*m+2:2*max(0,2-mp)", "y^2*z + z^{mp}*w", "z*y + y^{m}*x", &dm, hm)
            .param("m", 1)
            .param("mp", 1)
            .trunc("max(30, 10*max(m,mp)+8)"),
        new(
            6,
            p2.clone(),
            "D:2*n:2*max(0,n-m)",
            "D:n+2*m:n",
            "z*w",
            "z*y + y^{n} + y^{m}*x",
            &["z + {m}*y^{m-1}*x + {n}*y^{n-1}", "y^{m}", "0"],
            hm,
        )
        .param("m", 1)
        .param("n", 2)
        .trunc("max(30, 8*max(m,n)+8)"),
        new(7, p2.clone(), "D:n+2*m:n", "D:2*n:2*max(0,n-m)", "y^2*z + z^{n} + z^{m}*w", "y*x", &["x", "y", "0"], "1")
            .param("m", 1)
            .param("n", 2)
            .trunc("max(30, 8*max(m,n)+8)"),
        new(8, p2.clone(), "D:2*m+3:1", "E:7:2*max(0,3-m)", "y^2*z + z^{m}*w", "y^3 + z*x", &["y^2", "z", "0"], "0")
            .param("m", 1)
            .trunc("max(30, 8*m+8)"),
        new(9, p2.clone(), "E:7:2*max(0,3-m)", "D:2*m+3:1", "z^3 + y^2*w", "z*y + y^{m}*x", &dm, hm)
            .param("m", 1)
            .trunc("max(30, 8*m+8)"),
        new(10, p2.clone(), "E:7:6", "E:7:6", "z^3 + z*w", "y^3 + y*x", &["x + y^2", "y", "0"], "1"),
        new(11, p2.clone(), "E:7:4", "E:8:6", "z^3 + z*w", "y^3 + z*x", &["y^2", "z", "0"], "0"),
        new(12, p2.clone(), "E:8:6", "E:7:4", "z^3 + y^2*w", "y^3 + y*x", &["x + y^2", "y", "0"], "1"),
        new(13, p2, "E:8:4", "E:8:4", "z^3 + y^2*w", "y^3 + z*x", &["y^2", "z", "0"], "0"),
    ]
}

fn table5() -> Vec<Row> {
    let div = FixExpectation::Divisorial;
    let new = |row, chars, b: &str, b1: &str, l: &str| {
        Row::new(5, row, chars, b, b1, div).l(l).gens(&[("W", "__w__"), ("Z", "z"), ("Y", "y^{p}")])
    };
    let rows = vec![
        new(1, CharConstraint::OneModL, "A:l-1", "A:l-1", "l")
            .param("l", 2)
            .eq("-x^{l} + y*z")
            .der(&["x", "{l}*y", "0"])
            .der2(&["z", "{l}*x^{l-1}", "0"])
            .w("x*y^{(p-1)/l}")
            .trunc("max(24, l*p+8)"),
        new(2, CharConstraint::OneModL, "D:m+2", "D:m*p+2", "2")
            .param("m", 1)
            .eq("-x^2 + z*(y^2 + z^{m})")
            .der(&["y*z", "x", "0"])
            .der2(&["y*x", "y^2 + z^{m}", "0"])
            .w("x*(y^2 + z^{m})^{(p-1)/2}")
            .trunc("max(24, 3*m*p+12)"),
        new(3, CharConstraint::OneModL, "D:m*p+2", "D:m+2", "2")
            .param("m", 1)
            .eq("-x^2 + y*(z^2 + y^{m*p})")
            .der(&["z^2 + y^{m*p}", "2*x", "0"])
            .der2(&["x", "2*y", "0"])
            .w("x*y^{(p-1)/2}")
            .trunc("max(24, 3*m*p+12)"),
        new(4, CharConstraint::Fixed { p: 3 }, "E:7:2", "E:7:2", "2")
            .eq("-x^2 + (y^3 + z^2)*(y^2 + z)")
            .der(&["x*y", "y^2 + z", "0"])
            .der2(&["(y^3 + z^2)*y", "x", "0"])
            .w("x*(y^2 + z)")
            .trunc("30"),
    ];
    rows.into_iter()
        .map(|mut r| {
            let w = r.0.w.clone().expect("listed invariant");
            if let GeneratorSpec::Listed { generators } = &mut r.0.generators {
                generators[0].1 = w;
            }
            r
        })
        .collect()
}

fn table6() -> Vec<Row> {
    use Parity::*;
    let one_mod = CharConstraint::OneModL;
    let new = |row, chars, cover: &str, fixed: &str| Row::new(6, row, chars, cover, fixed, FixExpectation::MPrimary);
    let scalar = ["{zeta}*x", "{zeta_inv}*y", "z"];
    let swap = ["y", "x", "-z"];
    let quarter = ["y", "-x", "-z"];
    let mut r1 = new(1, one_mod.clone(), "Smooth", "Smooth")
        .plane()
        .param("l", 2)
        .l("l")
        .der(&["0", "1"])
        .action("A:l-1", &["{zeta}*x", "{zeta_inv}*y"], true);
    r1.0.fix = FixExpectation::FixedPointFree;
    let mut r5 = new(5, one_mod.clone(), "A:n*p-1", "A:n-1")
        .param("l", 2)
        .param("n", 1)
        .l("l")
        .eq("x*y - z^{n*p}")
        .der(&["0", "0", "1"])
        .action("A:l*n*p-1", &scalar, false);
    r5.0.fix = FixExpectation::FixedPointFree;
    let mut r6 = new(6, one_mod.clone(), "A:n*p-1", "A:n-1")
        .param_parity("n", 2, Even)
        .l("2")
        .eq("x*y - z^{n*p}")
        .der(&["0", "0", "1"])
        .action("D:n*p/2+2", &swap, true);
    r6.0.fix = FixExpectation::FixedPointFree;
    let mut r7 = new(7, one_mod.clone(), "A:n*p-1", "A:n-1")
        .param_parity("n", 1, Odd)
        .l("4")
        .eq("x*y - z^{n*p}")
        .der(&["0", "0", "1"])
        .action("D:n*p+2", &quarter, false);
    r7.0.fix = FixExpectation::FixedPointFree;
    let rows = vec![
        r1,
        new(2, one_mod.clone(), "A:n-1", "A:n*p-1")
            .param("l", 2)
            .param("n", 1)
            .l("l")
            .eq("x*y - z^{n}")
            .der(&["x", "-y", "0"])
            .action("A:l*n-1", &scalar, false),
        new(3, one_mod.clone(), "A:n-1", "A:n*p-1")
            .param_parity("n", 2, Even)
            .l("2")
            .eq("x*y - z^{n}")
            .der(&["x", "-y", "0"])
            .action("D:n/2+2", &swap, true),
        new(4, one_mod, "A:n-1", "A:n*p-1")
            .param_parity("n", 1, Odd)
            .l("4")
            .eq("x*y - z^{n}")
            .der(&["x", "-y", "0"])
            .action("D:n+2", &quarter, false),
        r5,
        r6,
        r7,
        new(8, CharConstraint::Fixed { p: 3 }, "E:6:2", "E:6:2")
            .l("2")
            .eq("z^2 + x^3 + y^3 + x^2*y^2")
            .der(&["x", "-y", "0"])
            .action("E:7:2", &swap, true),
    ];
    rows.into_iter()
        .map(|r| if r.0.params.iter().any(|q| q.name == "n") { r.trunc("max(24, 2*n*p+8)") } else { r.trunc("30") })
        .collect()
}

/// Every built-in row, ordered by table and row.
pub fn builtin_rows() -> Vec<TableRow> {
    [table1(), table2(), table3(), table5(), table6()].into_iter().flatten().map(|r| r.0).collect()
}
