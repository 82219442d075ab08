#include "gl2ode/coframe.hpp"

#include <map>
#include <stdexcept>
#include <string>

#include "gl2ode/parse.hpp"

namespace gl2ode {

namespace {

Slot slot_of(Gen g) {
  switch (g) {
    case Gen::Minus: return Slot::OmegaMinus;
    case Gen::Plus: return Slot::OmegaPlus;
    case Gen::Zero: return Slot::OmegaZero;
    case Gen::Scale: return Slot::Omega;
  }
  return Slot::Omega;
}

struct Entry {
  const char* label;
  Rational scale;
  const char* text;
};

// Base-section coefficients. "wK" multiplies omega^K, "tK" multiplies the
// K-th member of (theta_0^0, theta_0^1, theta_0^2, -, Omega+_0).
const Entry kCoframeEntries[] = {
    {"theta2.w0", Rational(1, 240), "-24*DF3 + 36*F2 + 11*F3^2"},
    {"theta2.w1", Rational(1, 12), "F3"},
    {"theta3.w0", Rational(1, 720), "36*DF2 - 144*F1 + 18*DF3*F3 - 36*F2*F3 - 7*F3^3"},
    {"theta3.w1", Rational(1, 240), "36*DF3 - 84*F2 - 19*F3^2"},
    {"theta3.w2", Rational(-1, 4), "F3"},
    {"Omega+.w0", Rational(-1, 60), "12*DF33 - 6*F23 + F3*F33"},
    {"Omega+.w1", Rational(1, 6), "F33"},
    {"Omega0.t0", Rational(1, 4320),
     "72*DF23 + 432*F13 - 288*F22 + 60*DF33*F3 - 216*F23*F3 - 108*DF3*F33 + 324*F2*F33 + 47*F3^2*F33"},
    {"Omega0.t1", Rational(1, 180), "3*DF33 - 9*F23 - F3*F33"},
    {"Omega0.t2", Rational(1, 6), "F33"},
    {"Omega0.t4", Rational(-1, 12), "F3"},
    {"Omega-.t0", Rational(1, 64800),
     "720*DF22 + 288*DF3*DF33 - 2160*F12 - 432*DF33*F2 + 216*DF3*F23 + 216*F2*F23 + 720*DF23*F3"
     " - 1080*F13*F3 - 360*F22*F3 + 48*DF33*F3^2 - 174*F23*F3^2 - 360*DF2*F33 + 1440*F1*F33"
     " + 24*DF3*F3*F33 + 324*F2*F3*F33 + 29*F3^3*F33 + 3600*F3y"},
    {"Omega-.t1", Rational(1, 1080),
     "-108*DF23 - 288*F13 + 252*F22 - 54*DF33*F3 + 186*F23*F3 + 66*DF3*F33 - 252*F2*F33 - 31*F3^2*F33"},
    {"Omega-.t2", Rational(1, 90), "12*DF33 - 6*F23 + F3*F33"},
    {"Omega-.t4", Rational(1, 360), "-24*DF3 + 36*F2 + 11*F3^2"},
    {"Omega.t0", Rational(1, 4320),
     "120*DF23 + 240*F13 - 240*F22 + 36*DF33*F3 - 168*F23*F3 - 36*DF3*F33 + 204*F2*F33 + 17*F3^2*F33"},
    {"Omega.t1", Rational(1, 12), "-DF33 + F23"},
    {"Omega.t2", Rational(-1, 6), "F33"},
    {"Omega.t4", Rational(1, 12), "F3"},
};

class FormulaSet {
 public:
  FormulaSet(JetDerivatives& jet, const Mutation* mutation) : jet_(jet), mutation_(mutation) {}
  Expr operator()(std::string_view label) {
    for (const auto& f : coframe_formulas())
      if (f.label == label) return build(f, jet_, mutation_);
    throw std::logic_error("unknown coframe formula " + std::string(label));
  }

 private:
  JetDerivatives& jet_;
  const Mutation* mutation_;
};

KForm scaled(const Expr& c, const KForm& f) { return c * f; }

}  // namespace

const KForm& CoframeSet::connection(Gen g) const { return (*this)[slot_of(g)]; }

std::array<KForm, 5> contact_forms(const Expr& F) {
  const ChartPtr& J = jet_chart();
  const KForm dx = KForm::differential(J, Sym::X);
  const Sym lower[] = {Sym::Y, Sym::Y1, Sym::Y2, Sym::Y3};
  const Expr next[] = {sym(Sym::Y1), sym(Sym::Y2), sym(Sym::Y3), F};
  std::array<KForm, 5> out;
  for (int i = 0; i < 4; ++i) out[i] = KForm::differential(J, lower[i]) - next[i] * dx;
  out[4] = dx;
  return out;
}

const std::vector<Formula>& coframe_formulas() {
  static const std::vector<Formula> formulas = [] {
    std::vector<Formula> out;
    for (const auto& e : kCoframeEntries) out.push_back(make_formula(e.label, e.scale, e.text));
    return out;
  }();
  return formulas;
}

CoframeSet base_coframe(JetDerivatives& jet, const Mutation* mutation) {
  const auto w = contact_forms(jet.F());
  FormulaSet c(jet, mutation);
  CoframeSet out;
  out[Slot::Theta0] = Expr(-3) * w[0];
  out[Slot::Theta1] = w[1];
  out[Slot::Theta2] = scaled(c("theta2.w0"), w[0]) + scaled(c("theta2.w1"), w[1]) - Expr(Rational(1, 2)) * w[2];
  out[Slot::Theta3] = scaled(c("theta3.w0"), w[0]) + scaled(c("theta3.w1"), w[1]) + scaled(c("theta3.w2"), w[2]) +
                      Expr(Rational(1, 2)) * w[3];
  out[Slot::OmegaPlus] = scaled(c("Omega+.w0"), w[0]) + scaled(c("Omega+.w1"), w[1]) + w[4];
  const std::array<KForm, 4> t{out[Slot::Theta0], out[Slot::Theta1], out[Slot::Theta2], out[Slot::OmegaPlus]};
  auto combo = [&](const std::string& name) {
    return scaled(c(name + ".t0"), t[0]) + scaled(c(name + ".t1"), t[1]) + scaled(c(name + ".t2"), t[2]) +
           scaled(c(name + ".t4"), t[3]);
  };
  out[Slot::OmegaZero] = combo("Omega0");
  out[Slot::OmegaMinus] = combo("Omega-");
  out[Slot::Omega] = combo("Omega");
  return out;
}

CoframeSet base_coframe(const Expr& F) {
  JetDerivatives jet(F);
  return base_coframe(jet);
}

const std::array<std::array<Expr, 4>, 4>& gauge_adjoint() {
  static const std::array<std::array<Expr, 4>, 4> adj = [] {
    const auto& m = gauge_matrix_symbolic();
    const auto& minv = gauge_inverse_symbolic();
    std::array<std::array<Expr, 4>, 4> out;
    for (std::size_t x = 0; x < 4; ++x) {
      Mat4<Expr> conj = matmul(matmul(m, convert<Expr>(gl2_generators()[kGenerators[x]])), minv);
      for (auto& row : conj)
        for (auto& e : row) e = simplify(e);
      auto c = decompose(conj);
      for (auto& e : c) e = simplify(e);
      const Mat4<Expr> back = compose(c);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          if (!simplify(back[i][j] - conj[i][j]).is_zero())
            throw std::logic_error("m E m^-1 has a component outside gl(2,R)");
      out[x] = c;
    }
    return out;
  }();
  return adj;
}

const std::array<KForm, 4>& gauge_maurer_cartan() {
  static const std::array<KForm, 4> mc = [] {
    const ChartPtr& P = bundle_chart();
    const auto& m = gauge_matrix_symbolic();
    const auto& minv = gauge_inverse_symbolic();
    std::array<KForm, 4> out;
    for (auto& f : out) f = KForm(P, 1);
    for (Sym s : {Sym::A10, Sym::A11, Sym::A44}) {
      Mat4<Expr> dminv;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) dminv[i][j] = partial(minv[i][j], s);
      Mat4<Expr> g = matmul(m, dminv);
      for (auto& row : g)
        for (auto& e : row) e = simplify(e);
      auto c = decompose(g);
      for (auto& e : c) e = simplify(e);
      const Mat4<Expr> back = compose(c);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          if (!simplify(back[i][j] - g[i][j]).is_zero())
            throw std::logic_error("m dm^-1 has a component outside gl(2,R)");
      const KForm ds = KForm::differential(P, s);
      for (std::size_t y = 0; y < 4; ++y)
        if (!c[y].is_zero()) out[y] += c[y] * ds;
    }
    return out;
  }();
  return mc;
}

CoframeSet lift_coframe(const CoframeSet& base) {
  const ChartPtr& P = bundle_chart();
  const auto& m = gauge_matrix_symbolic();
  std::array<KForm, 8> b;
  for (std::size_t i = 0; i < 8; ++i) b[i] = base.forms[i].on_chart(P);
  CoframeSet out;
  for (int i = 0; i < 4; ++i) {
    KForm t(P, 1);
    for (int j = 0; j <= i; ++j)
      if (!m[i][j].is_zero()) t += m[i][j] * b[j];
    out.forms[i] = t;
  }
  const auto& adj = gauge_adjoint();
  const auto& mc = gauge_maurer_cartan();
  for (std::size_t y = 0; y < 4; ++y) {
    KForm omega = mc[y];
    for (std::size_t x = 0; x < 4; ++x)
      if (!adj[x][y].is_zero()) omega += adj[x][y] * b[static_cast<std::size_t>(slot_of(kGenerators[x]))];
    out[slot_of(kGenerators[y])] = omega;
  }
  return out;
}

AlphaTable alpha_table(JetDerivatives& jet) {
  auto f = [&](const char* label, Rational scale, const char* text) {
    return build(make_formula(label, scale, text), jet);
  };
  auto p = [](const char* text) { return parse(text); };
  AlphaTable a;
  for (auto& row : a.entries) row.fill(Expr(0));
  a.entries[0][0] = p("-3*a11*a44");
  a.entries[1][0] = p("a10");
  a.entries[1][1] = p("a11");
  a.entries[2][0] = p("-a10^2/(3*a11*a44)") + p("a11/a44") * f("alpha20", Rational(1, 240), "-24*DF3 + 36*F2 + 11*F3^2");
  a.entries[2][1] = p("-2*a10/(3*a44)") + p("a11/a44") * f("alpha21", Rational(1, 12), "F3");
  a.entries[2][2] = p("-a11/(2*a44)");
  a.entries[3][0] = p("a10^3/(9*(a11*a44)^2)") +
                    p("a10/a44^2") * f("alpha30.a10", Rational(1, 240), "24*DF3 - 36*F2 - 11*F3^2") +
                    p("a11/a44^2") * f("alpha30.a11", Rational(1, 720), "36*DF2 - 144*F1 + 18*DF3*F3 - 36*F2*F3 - 7*F3^3");
  a.entries[3][1] = p("a10^2/(3*a11*a44^2)") - p("a10/a44^2") * f("alpha31.a10", Rational(1, 12), "F3") +
                    p("a11/a44^2") * f("alpha31.a11", Rational(1, 240), "36*DF3 - 84*F2 - 19*F3^2");
  a.entries[3][2] = p("a10/(2*a44^2)") - p("a11/a44^2") * f("alpha32", Rational(1, 4), "F3");
  a.entries[3][3] = p("a11/(2*a44^2)");
  a.entries[4][0] = p("-a44/60") * f("alpha40", Rational(1), "12*DF33 - 6*F23 + F3*F33");
  a.entries[4][1] = p("a44/6") * f("alpha41", Rational(1), "F33");
  a.entries[4][4] = p("a44");
  return a;
}

AlphaTable alpha_table(const Expr& F) {
  JetDerivatives jet(F);
  return alpha_table(jet);
}

std::array<KForm, 5> alpha_forms(const AlphaTable& alpha, const Expr& F) {
  const ChartPtr& P = bundle_chart();
  auto w = contact_forms(F);
  for (auto& f : w) f = f.on_chart(P);
  std::array<KForm, 5> out;
  for (int i = 0; i < 5; ++i) {
    KForm t(P, 1);
    for (int j = 0; j < 5; ++j)
      if (!alpha(i, j).is_zero()) t += alpha(i, j) * w[j];
    out[i] = t;
  }
  return out;
}

}  // namespace gl2ode
