#include "qwit/moment_matrices.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include <Eigen/LU>

namespace qwit {

namespace {

double binomial(int n, int k) {
  double b = 1.0;
  for (int j = 1; j <= k; ++j) b = b * double(n - k + j) / double(j);
  return b;
}

struct ModeTerm {
  double coeff;
  ModeExponents exps;
};

// (a+^p1 a^q1)(a+^p2 a^q2) on a single mode
std::vector<ModeTerm> mode_product(const ModeExponents& lhs, const ModeExponents& rhs) {
  std::vector<ModeTerm> out;
  const int k = lhs.annihilation;
  const int l = rhs.creation;
  double fact = 1.0;
  for (int r = 0; r <= std::min(k, l); ++r) {
    if (r > 0) fact *= r;
    out.push_back({binomial(k, r) * binomial(l, r) * fact,
                   {lhs.creation + l - r, k - r + rhs.annihilation}});
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

MonomialMoment parse_token(const std::string& token, int modes) {
  if (token == "1") return MonomialMoment::identity(modes);
  std::vector<ModeExponents> e(static_cast<std::size_t>(modes));
  std::size_t i = 0;
  if (token.empty()) throw Error(Errc::parse, "empty monomial token");
  while (i < token.size()) {
    if (token[i] != 'a') throw Error(Errc::parse, "bad monomial token '" + token + "'");
    ++i;
    std::size_t start = i;
    while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) ++i;
    if (start == i) throw Error(Errc::parse, "missing mode index in '" + token + "'");
    const int mode = std::stoi(token.substr(start, i - start));
    if (mode < 1 || mode > modes) {
      throw Error(Errc::parse, "mode index " + std::to_string(mode) + " out of range in '" + token + "'");
    }
    bool dagger = false;
    if (i < token.size() && token[i] == '+') {
      dagger = true;
      ++i;
    }
    (dagger ? e[mode - 1].creation : e[mode - 1].annihilation) += 1;
  }
  return MonomialMoment(std::move(e));
}

}  // namespace

MonomialList::MonomialList(std::vector<MonomialMoment> monos) : monos_(std::move(monos)) {
  if (monos_.empty()) throw Error(Errc::invalid_argument, "monomial list is empty");
  for (std::size_t i = 0; i < monos_.size(); ++i) {
    if (monos_[i].modes() != monos_[0].modes()) {
      throw Error(Errc::invalid_argument, "monomial list mixes mode counts");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (monos_[i] == monos_[j]) throw Error(Errc::invalid_argument, "monomial list has duplicate entries");
    }
  }
}

MonomialList MonomialList::parse(std::string_view text, int modes) {
  std::vector<MonomialMoment> monos;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    monos.push_back(parse_token(trim(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos)),
                                modes));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return MonomialList(std::move(monos));
}

std::string MonomialList::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < monos_.size(); ++i) os << (i ? "," : "") << monos_[i].to_string();
  return os.str();
}

NormalPolynomial normal_order_product(const MonomialMoment& lhs, const MonomialMoment& rhs) {
  if (lhs.modes() != rhs.modes()) throw Error(Errc::invalid_argument, "normal_order_product: mode count mismatch");
  const int modes = lhs.modes();
  std::vector<std::pair<Complex, std::vector<ModeExponents>>> partial{{1.0, {}}};
  for (int m = 0; m < modes; ++m) {
    const auto terms = mode_product(lhs[m], rhs[m]);
    std::vector<std::pair<Complex, std::vector<ModeExponents>>> next;
    next.reserve(partial.size() * terms.size());
    for (const auto& [c, e] : partial) {
      for (const auto& t : terms) {
        auto e2 = e;
        e2.push_back(t.exps);
        next.emplace_back(c * t.coeff, std::move(e2));
      }
    }
    partial = std::move(next);
  }
  NormalPolynomial poly;
  for (auto& [c, e] : partial) accumulate(poly, MonomialMoment(std::move(e)), c);
  return poly;
}

ComplexMatrix moment_matrix(const QuantumState& state, const MonomialList& fs) {
  const int n = fs.size();
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const MonomialMoment fi = fs[i].adjoint();
    for (int j = 0; j < n; ++j) m(i, j) = moment(state, fi.normal_product(fs[j]));
  }
  return m;
}

ComplexMatrix pt_moment_matrix(const QuantumState& state, const MonomialList& fs, int mode) {
  const ComplexMatrix rho_pt = partial_transpose(state, mode);
  const int n = fs.size();
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const MonomialMoment fi = fs[i].adjoint();
    for (int j = 0; j < n; ++j) {
      m(i, j) = trace_expect(rho_pt, state.layout(), normal_order_product(fi, fs[j]));
    }
  }
  return m;
}

double determinant(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error(Errc::invalid_dimension, "determinant of a non-square matrix");
  return Eigen::PartialPivLU<ComplexMatrix>(m).determinant().real();
}

bool determinant_negative(const ComplexMatrix& m) {
  double scale = 1.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) scale *= std::abs(m(i, i));
  const double det = determinant(m);
  return det < -1e-10 * scale && det < -1e-14;
}

bool nonclassicality_detected(const QuantumState& state, const MonomialList& fs) {
  return determinant_negative(moment_matrix(state, fs));
}

bool npt_detected(const QuantumState& state, const MonomialList& fs, int mode) {
  return determinant_negative(pt_moment_matrix(state, fs, mode));
}

std::vector<MonomialList> default_monomial_lists(int modes) {
  std::vector<MonomialList> out;
  for (int m = 1; m <= modes; ++m) {
    const std::string a = "a" + std::to_string(m);
    out.push_back(MonomialList::parse("1," + a, modes));
    out.push_back(MonomialList::parse(a + "," + a + "+", modes));
    out.push_back(MonomialList::parse("1," + a + "+" + a, modes));
  }
  if (modes == 2) {
    out.push_back(MonomialList::parse("a1,a2+", modes));
    out.push_back(MonomialList::parse("a1,a2", modes));
    out.push_back(MonomialList::parse("1,a1a2", modes));
  }
  return out;
}

}  // namespace qwit
