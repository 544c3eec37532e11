#pragma once

#include <cstdint>
#include <vector>

namespace credinet {

struct BalanceSheet {
    int ell = 0;  ///< liabilities: incoming loans
    int b = 0;    ///< assets: outgoing loans
};

/// Stable handle for a loan; valid from add_loan until the loan is removed.
using LinkId = std::uint32_t;
inline constexpr LinkId kInvalidLink = UINT32_MAX;

/// Directed multigraph of loans with per-agent balance-sheet counts.
/// Parallel links between the same ordered pair are allowed; self-loops
/// are not. All mutations keep sum(ell) == sum(b) == link_count().
class CreditNetwork {
  public:
    explicit CreditNetwork(int n_agents);

    int n_agents() const { return static_cast<int>(sheets_.size()); }
    std::int64_t link_count() const { return static_cast<std::int64_t>(active_.size()); }
    const BalanceSheet& sheet(int agent) const;

    LinkId add_loan(int lender, int borrower);
    void mature_loan(LinkId link);

    struct DefaultResult {
        int removed_assets = 0;       ///< links where the defaulter was the lender
        int removed_liabilities = 0;  ///< links where the defaulter was the borrower
    };
    /// Removes every link incident to `agent` and resets its sheet to (0,0).
    /// Counterparties are not re-checked; cascades happen only through later
    /// disclosure events.
    DefaultResult default_agent(int agent);

    /// The idx-th live link, 0 <= idx < link_count(). Ordering is an
    /// implementation detail; use with a uniform index for uniform sampling.
    LinkId link_at(std::size_t idx) const { return active_[idx]; }
    bool contains(LinkId link) const;
    int lender_of(LinkId link) const;
    int borrower_of(LinkId link) const;

  private:
    struct Slot {
        int lender = -1;
        int borrower = -1;
        std::uint32_t pos_active = 0;
        std::uint32_t pos_out = 0;  // position in out_[lender]
        std::uint32_t pos_in = 0;   // position in in_[borrower]
        bool alive = false;
    };

    void check_agent(int agent) const;
    void detach(LinkId link);

    std::vector<Slot> slots_;
    std::vector<LinkId> active_;
    std::vector<LinkId> free_;
    std::vector<std::vector<LinkId>> out_;  // links lent out by agent
    std::vector<std::vector<LinkId>> in_;   // links borrowed by agent
    std::vector<BalanceSheet> sheets_;
};

}  // namespace credinet
