#include "parmot/symfunc.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace parmot {

ParamPoly SymFunc::m_coefficient(const std::vector<int>& kappa) const {
    int total = 0;
    std::vector<int> sorted;
    for (int k : kappa) {
        if (k < 0) throw std::invalid_argument("m_coefficient: negative multiplicity");
        total += k;
        if (k > 0) sorted.push_back(k);
    }
    if (total != degree) return ParamPoly{};
    std::sort(sorted.begin(), sorted.end(), std::greater<int>());
    auto it = terms.find(Partition(sorted));
    return it == terms.end() ? ParamPoly{} : it->second;
}

namespace {

// Cells in reading order: shortest row first, left to right within a row.
// Rows are 0-based (row 0 is the longest), columns 0-based.
struct Cell {
    int row, col;
};

SymFunc compute_macdonald(const Partition& mu) {
    SymFunc f;
    f.degree = mu.size();
    if (mu.empty()) {
        f.terms[Partition()].add(0, 0, 1);
        return f;
    }

    const int ncells = mu.size();
    const int nrows = mu.length();
    std::vector<Cell> cells;
    for (int i = nrows - 1; i >= 0; --i)
        for (int c = 0; c < mu.parts()[i]; ++c) cells.push_back({i, c});

    // Position of (row, col) in the reading order, for neighbor lookups.
    auto index_of = [&](int row, int col) {
        for (int k = 0; k < ncells; ++k)
            if (cells[k].row == row && cells[k].col == col) return k;
        throw std::logic_error("macdonald: bad cell");
    };

    // Descent partner (cell in the previous row, same column) and attack pairs,
    // both expressed via reading-order indices.
    std::vector<int> up(ncells, -1);  // descent comparison cell
    for (int k = 0; k < ncells; ++k)
        if (cells[k].row >= 1) up[k] = index_of(cells[k].row - 1, cells[k].col);

    std::vector<std::pair<int, int>> attack;  // (earlier, later) in reading order
    for (int a = 0; a < ncells; ++a) {
        for (int b = a + 1; b < ncells; ++b) {
            const Cell &u = cells[a], &v = cells[b];
            bool same_row = u.row == v.row;
            // consecutive rows, the cell in the shorter row strictly right
            bool next_row = v.row == u.row - 1 && u.col > v.col;
            if (same_row || next_row) attack.emplace_back(a, b);
        }
    }

    std::vector<int> arm_of(ncells), leg_of(ncells);
    for (int k = 0; k < ncells; ++k) {
        arm_of[k] = mu.arm(cells[k].row, cells[k].col);
        leg_of[k] = mu.leg(cells[k].row, cells[k].col);
    }

    // One content class per partition lambda of |mu|: value v+1 appears
    // lambda_{v+1} times. The m-basis coefficient is the generating sum of
    // z^inv q^maj over fillings of that content.
    for (const Partition& lam : partitions_of(mu.size())) {
        std::vector<int> filling;
        for (int v = 0; v < lam.length(); ++v)
            for (int k = 0; k < lam.parts()[v]; ++k) filling.push_back(v + 1);
        std::sort(filling.begin(), filling.end());

        ParamPoly acc;
        do {
            int maj = 0, inv_count = 0, arm_sum = 0;
            for (int k = 0; k < ncells; ++k) {
                if (up[k] >= 0 && filling[k] > filling[up[k]]) {
                    maj += leg_of[k] + 1;
                    arm_sum += arm_of[k];
                }
            }
            for (auto& [a, b] : attack)
                if (filling[a] > filling[b]) inv_count++;
            acc.add(inv_count - arm_sum, maj, 1);
        } while (std::next_permutation(filling.begin(), filling.end()));

        f.terms[lam] = std::move(acc);
    }
    return f;
}

}  // namespace

const SymFunc& hhl_modified_macdonald(const Partition& mu, int size_bound) {
    if (mu.size() > size_bound)
        throw std::length_error("hhl_modified_macdonald: |mu| exceeds the configured bound");
    static std::mutex mtx;
    static std::map<Partition, SymFunc> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(mu);
    if (it == cache.end()) it = cache.emplace(mu, compute_macdonald(mu)).first;
    return it->second;
}

}  // namespace parmot
