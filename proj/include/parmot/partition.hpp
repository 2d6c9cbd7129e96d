#ifndef PARMOT_PARTITION_HPP
#define PARMOT_PARTITION_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace parmot {

// Integer partition: weakly decreasing positive parts, empty = zero partition.
// English (matrix) convention, cells indexed (row, col) from 1.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<int> parts);

    const std::vector<int>& parts() const { return parts_; }
    int length() const { return (int)parts_.size(); }
    int size() const;                 // |mu|
    bool empty() const { return parts_.empty(); }
    int part(int i) const { return i < (int)parts_.size() ? parts_[i] : 0; }  // 0-based

    Partition conjugate() const;

    // Cells strictly to the right in the same row / strictly below in the
    // same column. (row, col) are 0-based here.
    int arm(int row, int col) const { return parts_[row] - 1 - col; }
    int leg(int row, int col) const;

    // n(mu) = sum (i-1) mu_i
    long n_stat() const;

    // <mu,nu> = sum mu'_i nu'_i = sum over columns
    static long pairing(const Partition& a, const Partition& b);

    // sum over cells of (2 l + 1); equals <mu,mu> = 2 n(mu) + |mu|
    long sum_two_leg_plus_one() const;

    auto operator<=>(const Partition&) const = default;

    std::string to_string() const;

private:
    std::vector<int> parts_;
};

// All partitions of every m <= n, in deterministic order: by size, then
// reverse-lexicographic within a size (largest first part first).
std::vector<Partition> enumerate_partitions(int n);

// Partitions of exactly n.
std::vector<Partition> partitions_of(int n);

}  // namespace parmot

#endif
