#include "credinet/network.hpp"

#include <stdexcept>
#include <string>

namespace credinet {

CreditNetwork::CreditNetwork(int n_agents) {
    if (n_agents < 2)
        throw std::invalid_argument("CreditNetwork needs at least 2 agents, got " +
                                    std::to_string(n_agents));
    sheets_.resize(n_agents);
    out_.resize(n_agents);
    in_.resize(n_agents);
}

void CreditNetwork::check_agent(int agent) const {
    if (agent < 0 || agent >= n_agents())
        throw std::out_of_range("agent index " + std::to_string(agent) + " out of range");
}

const BalanceSheet& CreditNetwork::sheet(int agent) const {
    check_agent(agent);
    return sheets_[agent];
}

bool CreditNetwork::contains(LinkId link) const {
    return link < slots_.size() && slots_[link].alive;
}

int CreditNetwork::lender_of(LinkId link) const {
    if (!contains(link)) throw std::out_of_range("unknown link id");
    return slots_[link].lender;
}

int CreditNetwork::borrower_of(LinkId link) const {
    if (!contains(link)) throw std::out_of_range("unknown link id");
    return slots_[link].borrower;
}

LinkId CreditNetwork::add_loan(int lender, int borrower) {
    check_agent(lender);
    check_agent(borrower);
    if (lender == borrower) throw std::invalid_argument("self-loop loan rejected");

    LinkId id;
    if (!free_.empty()) {
        id = free_.back();
        free_.pop_back();
    } else {
        id = static_cast<LinkId>(slots_.size());
        slots_.emplace_back();
    }
    Slot& s = slots_[id];
    s.lender = lender;
    s.borrower = borrower;
    s.alive = true;
    s.pos_active = static_cast<std::uint32_t>(active_.size());
    active_.push_back(id);
    s.pos_out = static_cast<std::uint32_t>(out_[lender].size());
    out_[lender].push_back(id);
    s.pos_in = static_cast<std::uint32_t>(in_[borrower].size());
    in_[borrower].push_back(id);

    sheets_[lender].b += 1;
    sheets_[borrower].ell += 1;
    return id;
}

void CreditNetwork::detach(LinkId link) {
    Slot& s = slots_[link];

    auto swap_remove = [](std::vector<LinkId>& v, std::uint32_t pos, auto fix) {
        LinkId moved = v.back();
        v[pos] = moved;
        v.pop_back();
        if (pos < v.size()) fix(moved, pos);
    };

    swap_remove(active_, s.pos_active,
                [&](LinkId moved, std::uint32_t pos) { slots_[moved].pos_active = pos; });
    swap_remove(out_[s.lender], s.pos_out,
                [&](LinkId moved, std::uint32_t pos) { slots_[moved].pos_out = pos; });
    swap_remove(in_[s.borrower], s.pos_in,
                [&](LinkId moved, std::uint32_t pos) { slots_[moved].pos_in = pos; });

    sheets_[s.lender].b -= 1;
    sheets_[s.borrower].ell -= 1;
    s.alive = false;
    free_.push_back(link);
}

void CreditNetwork::mature_loan(LinkId link) {
    if (!contains(link)) throw std::out_of_range("mature_loan: unknown link id");
    detach(link);
}

CreditNetwork::DefaultResult CreditNetwork::default_agent(int agent) {
    check_agent(agent);
    DefaultResult res;
    while (!out_[agent].empty()) {
        detach(out_[agent].back());
        ++res.removed_assets;
    }
    while (!in_[agent].empty()) {
        detach(in_[agent].back());
        ++res.removed_liabilities;
    }
    sheets_[agent] = BalanceSheet{};
    return res;
}

}  // namespace credinet
