#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sws/complex_matrix.hpp"
#include "sws/sector.hpp"

namespace sws {

enum class ExchangeKind { P1, P3, PAll, PE, PEPrime, PES, CustomPairSwap };

enum class Completion {
    UnitaryCompletion,  // entanglers become the reflection source <-> target
    RawAsWritten,       // the literal sum, non-unitary for PE/PE'/PES
};

/// Declarative description of which exchange operator to build.
struct ExchangeSpec {
    ExchangeKind kind = ExchangeKind::P1;
    int n = 0;
    std::vector<std::pair<int, int>> pairs;  // CustomPairSwap only
    Completion completion = Completion::UnitaryCompletion;
    bool allow_degenerate = false;  // permits PE' at N = 3 (site collision)
};

struct ExchangeOperator {
    ExchangeSpec spec;
    ComplexMatrix matrix;  // on the sector basis (zero slot fixed when present)
    double unitarity_defect = 0.0;
};

ExchangeOperator build_exchange(const ExchangeSpec& spec, const SectorBasis& basis);

struct ExchangeReport {
    bool involution = false;
    double unitarity_defect = 0.0;
    std::vector<int> fixed_sites;
};

ExchangeReport verify_exchange(const ExchangeOperator& op);

/// Swapped site pairs of P_All: (j, r+1-j) for j <= M1 and (j, N+r+1-j) for
/// r < j <= M2, with M1/M2 switching on the parity of (N-3)/2. Self-pairings
/// are fixed points and dropped.
std::vector<std::pair<int, int>> pall_pairs(int n);

/// Sites summed in the multi-site probability for this kind, when the kind
/// has one: {1, 2, N} for P3 and {1..r} for PAll.
std::optional<std::vector<int>> default_target_sites(const ExchangeSpec& spec);

/// A ring reflection (as a 1-based site map) that commutes with both the
/// chain Hamiltonian and this operator, when one exists. Scan kernels use it
/// to split W into two half-size blocks.
std::optional<std::vector<int>> commuting_reflection(const ExchangeSpec& spec);

/// Canonical text form: p1 | p3 | pall | pe | pe-prime | pes | pairs:1-5,2-4
ExchangeSpec parse_exchange(const std::string& text, int n);
std::string exchange_name(const ExchangeSpec& spec);

}  // namespace sws
