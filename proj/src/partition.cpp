#include "parmot/partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace parmot {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] <= 0) throw std::invalid_argument("Partition: parts must be positive");
        if (i > 0 && parts_[i] > parts_[i - 1])
            throw std::invalid_argument("Partition: parts must be weakly decreasing");
    }
}

int Partition::size() const {
    int s = 0;
    for (int p : parts_) s += p;
    return s;
}

Partition Partition::conjugate() const {
    if (parts_.empty()) return Partition();
    std::vector<int> cols(parts_[0], 0);
    for (int p : parts_)
        for (int j = 0; j < p; ++j) cols[j]++;
    return Partition(std::move(cols));
}

int Partition::leg(int row, int col) const {
    int l = 0;
    for (size_t i = row + 1; i < parts_.size(); ++i)
        if (parts_[i] > col) l++;
    return l;
}

long Partition::n_stat() const {
    long s = 0;
    for (size_t i = 0; i < parts_.size(); ++i) s += (long)i * parts_[i];
    return s;
}

long Partition::pairing(const Partition& a, const Partition& b) {
    Partition ac = a.conjugate(), bc = b.conjugate();
    long s = 0;
    size_t n = std::min(ac.parts_.size(), bc.parts_.size());
    for (size_t i = 0; i < n; ++i) s += (long)ac.parts_[i] * bc.parts_[i];
    return s;
}

long Partition::sum_two_leg_plus_one() const {
    long s = 0;
    for (size_t i = 0; i < parts_.size(); ++i)
        for (int j = 0; j < parts_[i]; ++j) s += 2 * leg((int)i, j) + 1;
    return s;
}

std::string Partition::to_string() const {
    std::string s = "(";
    for (size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(parts_[i]);
    }
    return s + ")";
}

namespace {
void gen_rec(int remaining, int max_part, std::vector<int>& cur,
             std::vector<Partition>& out) {
    if (remaining == 0) {
        out.emplace_back(cur);
        return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
        cur.push_back(p);
        gen_rec(remaining - p, p, cur, out);
        cur.pop_back();
    }
}
}  // namespace

std::vector<Partition> partitions_of(int n) {
    if (n < 0) throw std::invalid_argument("partitions_of: n must be >= 0");
    std::vector<Partition> out;
    std::vector<int> cur;
    gen_rec(n, n, cur, out);
    if (n == 0) out = {Partition()};
    return out;
}

std::vector<Partition> enumerate_partitions(int n) {
    std::vector<Partition> out;
    for (int m = 0; m <= n; ++m) {
        auto pm = partitions_of(m);
        out.insert(out.end(), pm.begin(), pm.end());
    }
    return out;
}

}  // namespace parmot
