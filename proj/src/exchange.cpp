#include "sws/exchange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace sws {

namespace {

void check_sites_distinct(const std::vector<int>& sites, const std::string& what) {
    std::set<int> seen(sites.begin(), sites.end());
    if (seen.size() != sites.size())
        throw validation_error(what + ": site collision in operator definition");
}

ComplexMatrix permutation_matrix(const SectorBasis& basis,
                                 const std::vector<std::pair<int, int>>& pairs) {
    ComplexMatrix p = ComplexMatrix::identity(basis.dim);
    std::vector<int> touched;
    for (auto [a, b] : pairs) {
        if (a < 1 || a > basis.n || b < 1 || b > basis.n)
            throw validation_error("pair swap: site out of range");
        touched.push_back(a);
        touched.push_back(b);
    }
    check_sites_distinct(touched, "pair swap");
    for (auto [a, b] : pairs) {
        int i = basis.slot(a), j = basis.slot(b);
        p(i, i) = p(j, j) = 0.0;
        p(i, j) = p(j, i) = 1.0;
    }
    return p;
}

/// Reflection exchanging |source> with the normalized superposition over
/// target_sites, identity on the orthogonal complement.
ComplexMatrix completion_matrix(const SectorBasis& basis, int source,
                                const std::vector<int>& target_sites) {
    std::vector<int> all = target_sites;
    all.push_back(source);
    check_sites_distinct(all, "unitary completion");
    const int d = basis.dim;
    std::vector<double> s(d, 0.0), t(d, 0.0);
    s[basis.slot(source)] = 1.0;
    double a = 1.0 / std::sqrt(double(target_sites.size()));
    for (int j : target_sites) {
        if (j < 1 || j > basis.n) throw validation_error("unitary completion: site out of range");
        t[basis.slot(j)] = a;
    }
    // u = s - t is orthogonal to the fixed complement; P = I - u u^T
    ComplexMatrix p = ComplexMatrix::identity(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) p(i, j) -= (s[i] - t[i]) * (s[j] - t[j]);
    return p;
}

ComplexMatrix raw_entangler(const SectorBasis& basis, int source,
                            const std::vector<int>& target_sites, double prefactor,
                            bool with_p0) {
    const int d = basis.dim;
    ComplexMatrix p(d, d);
    if (basis.include_zero) p(0, 0) = 1.0;
    int si = basis.slot(source);
    std::set<int> named{source};
    for (int j : target_sites) {
        int ji = basis.slot(j);
        p(si, ji) += prefactor;
        p(ji, si) += prefactor;
        named.insert(j);
    }
    if (with_p0) {
        for (int j = 1; j <= basis.n; ++j)
            if (!named.count(j)) p(basis.slot(j), basis.slot(j)) = 1.0;
    }
    return p;
}

int wrap_site(int x, int n) {
    x %= n;
    if (x <= 0) x += n;
    return x;
}

}  // namespace

std::vector<std::pair<int, int>> pall_pairs(int n) {
    const int r = (n + 1) / 2;
    int m1, m2;
    if (((n - 3) / 2) % 2 == 0) {
        m1 = (n + 1) / 4;
        m2 = (3 * n - 1) / 4;
    } else {
        m1 = (n - 1) / 4;
        m2 = (3 * n + 1) / 4;
    }
    std::vector<std::pair<int, int>> pairs;
    for (int j = 1; j <= m1; ++j) {
        int k = r + 1 - j;
        if (j != k) pairs.emplace_back(j, k);
    }
    for (int j = r + 1; j <= m2; ++j) {
        int k = n + r + 1 - j;
        if (j != k) pairs.emplace_back(j, k);
    }
    return pairs;
}

ExchangeOperator build_exchange(const ExchangeSpec& spec, const SectorBasis& basis) {
    if (spec.n != basis.n)
        throw validation_error("build_exchange: spec.n and basis disagree");
    const int n = basis.n;
    const int r = basis.receiver;
    const bool completed = spec.completion == Completion::UnitaryCompletion;

    ExchangeOperator op;
    op.spec = spec;
    switch (spec.kind) {
        case ExchangeKind::P1:
            op.matrix = permutation_matrix(basis, {{1, r}});
            break;
        case ExchangeKind::P3:
            if (n < 7)
                throw validation_error(
                    "P3 needs N >= 7 so sites 1, 2, N, r-1, r, r+1 are distinct");
            op.matrix = permutation_matrix(basis, {{1, r}, {2, r - 1}, {n, r + 1}});
            break;
        case ExchangeKind::PAll:
            op.matrix = permutation_matrix(basis, pall_pairs(n));
            break;
        case ExchangeKind::CustomPairSwap:
            op.matrix = permutation_matrix(basis, spec.pairs);
            break;
        case ExchangeKind::PE:
            op.matrix = completed
                            ? completion_matrix(basis, 1, {r, r + 1})
                            : raw_entangler(basis, 1, {r, r + 1}, 1.0 / std::sqrt(2.0), true);
            break;
        case ExchangeKind::PEPrime:
            if (n == 3) {
                if (!spec.allow_degenerate)
                    throw validation_error(
                        "PE' at N = 3 collides sites {1, 2, r = 2}; pass the degenerate-case "
                        "flag to build it anyway");
                // The written pair {1, r} contains the source at N = 3. The
                // completed variant keeps the source at 2 and entangles the
                // remaining two sites; the raw variant is the literal sum,
                // self-term included.
                op.matrix = completed
                                ? completion_matrix(basis, 2, {1, 3})
                                : raw_entangler(basis, 2, {1, 2}, 1.0 / std::sqrt(2.0), true);
            } else {
                if (n < 5) throw validation_error("PE' needs N >= 5 for distinct sites 1, 2, r");
                op.matrix = completed
                                ? completion_matrix(basis, 2, {1, r})
                                : raw_entangler(basis, 2, {1, r}, 1.0 / std::sqrt(2.0), true);
            }
            break;
        case ExchangeKind::PES: {
            std::vector<int> rest(n - 1);
            std::iota(rest.begin(), rest.end(), 2);
            // the paper's 1/sqrt(N) prefactor over N-1 terms cannot be
            // unitary; the completion normalizes by sqrt(N-1)
            op.matrix = completed ? completion_matrix(basis, 1, rest)
                                  : raw_entangler(basis, 1, rest, 1.0 / std::sqrt(double(n)),
                                                  false);
            break;
        }
    }
    op.unitarity_defect = unitarity_defect(op.matrix);
    if (completed && op.unitarity_defect >= 1e-12)
        throw numeric_error("build_exchange: completed operator has unitarity defect " +
                            std::to_string(op.unitarity_defect));
    return op;
}

ExchangeReport verify_exchange(const ExchangeOperator& op) {
    ExchangeReport rep;
    rep.unitarity_defect = op.unitarity_defect;
    const ComplexMatrix sq = op.matrix * op.matrix;
    rep.involution = frobenius_distance(sq, ComplexMatrix::identity(sq.rows())) < 1e-12;
    const SectorBasis b{op.spec.n, sq.rows() > op.spec.n, sq.rows(), (op.spec.n + 1) / 2};
    for (int j = 1; j <= op.spec.n; ++j) {
        int i = b.slot(j);
        bool fixed = std::abs(op.matrix(i, i) - cplx(1.0)) < 1e-12;
        if (fixed)
            for (int k = 0; k < op.matrix.rows(); ++k)
                if (k != i && std::abs(op.matrix(k, i)) > 1e-12) fixed = false;
        if (fixed) rep.fixed_sites.push_back(j);
    }
    return rep;
}

std::optional<std::vector<int>> default_target_sites(const ExchangeSpec& spec) {
    if (spec.kind == ExchangeKind::P3) return std::vector<int>{1, 2, spec.n};
    if (spec.kind == ExchangeKind::PAll) {
        std::vector<int> t((spec.n + 1) / 2);
        std::iota(t.begin(), t.end(), 1);
        return t;
    }
    return std::nullopt;
}

std::optional<std::vector<int>> commuting_reflection(const ExchangeSpec& spec) {
    const int n = spec.n;
    const int r = (n + 1) / 2;
    std::vector<int> sigma(n + 1, 0);  // 1-based
    switch (spec.kind) {
        case ExchangeKind::P1:
        case ExchangeKind::P3:
        case ExchangeKind::PAll:
            // j <-> r+1-j (mod N): maps the swapped pair sets to themselves
            for (int j = 1; j <= n; ++j) sigma[j] = wrap_site(r + 1 - j, n);
            return sigma;
        case ExchangeKind::PE:
        case ExchangeKind::PES:
            // reflection through site 1: fixes the source, swaps r <-> r+1
            // and permutes {2..N} among themselves
            for (int j = 1; j <= n; ++j) sigma[j] = wrap_site(2 - j, n);
            return sigma;
        default:
            return std::nullopt;
    }
}

ExchangeSpec parse_exchange(const std::string& text, int n) {
    ExchangeSpec spec;
    spec.n = n;
    if (text == "p1") spec.kind = ExchangeKind::P1;
    else if (text == "p3") spec.kind = ExchangeKind::P3;
    else if (text == "pall") spec.kind = ExchangeKind::PAll;
    else if (text == "pe") spec.kind = ExchangeKind::PE;
    else if (text == "pe-prime") spec.kind = ExchangeKind::PEPrime;
    else if (text == "pes") spec.kind = ExchangeKind::PES;
    else if (text.rfind("pairs:", 0) == 0) {
        spec.kind = ExchangeKind::CustomPairSwap;
        std::stringstream ss(text.substr(6));
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto dash = item.find('-');
            if (dash == std::string::npos)
                throw validation_error("pairs: expected a-b entries, got '" + item + "'");
            try {
                int a = std::stoi(item.substr(0, dash));
                int b = std::stoi(item.substr(dash + 1));
                spec.pairs.emplace_back(a, b);
            } catch (const std::exception&) {
                throw validation_error("pairs: cannot parse '" + item + "'");
            }
        }
        if (spec.pairs.empty()) throw validation_error("pairs: empty pair list");
    } else {
        throw validation_error("unknown exchange operator '" + text +
                               "' (expected p1|p3|pall|pe|pe-prime|pes|pairs:a-b,...)");
    }
    return spec;
}

std::string exchange_name(const ExchangeSpec& spec) {
    switch (spec.kind) {
        case ExchangeKind::P1: return "p1";
        case ExchangeKind::P3: return "p3";
        case ExchangeKind::PAll: return "pall";
        case ExchangeKind::PE: return "pe";
        case ExchangeKind::PEPrime: return "pe-prime";
        case ExchangeKind::PES: return "pes";
        case ExchangeKind::CustomPairSwap: {
            std::string s = "pairs:";
            for (size_t i = 0; i < spec.pairs.size(); ++i) {
                if (i) s += ",";
                s += std::to_string(spec.pairs[i].first) + "-" +
                     std::to_string(spec.pairs[i].second);
            }
            return s;
        }
    }
    return "?";
}

}  // namespace sws
