#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "oel/abstraction.hpp"
#include "oel/background.hpp"
#include "oel/encoder.hpp"
#include "oel/errors.hpp"
#include "oel/explorer.hpp"
#include "oel/image.hpp"
#include "oel/memory.hpp"
#include "oel/planner.hpp"

namespace oel {

enum class AgentState {
    ActionStart,
    ProposeAction,
    PlanAction,
    DoAction,
    EndAction,
    WaitForGoal,
};

/// State machine tying Explorer, Abstractor artifacts and Planner together.
///
/// Intrinsic phase: every step() proposes a random action and finish()
/// records the (pre, action, post) triplet. Extrinsic phase: every step()
/// replans from the fresh observation, executes only the first plan action,
/// and goes silent (WaitForGoal) for the rest of the trial once no plan
/// exists at any abstraction level.
class Agent {
  public:
    static Agent intrinsic(Rng* rng, ExplorationMode mode, TableGeometry geometry,
                           TripletStore* store) {
        Agent a;
        a.rng_ = rng;
        a.mode_ = mode;
        a.geometry_ = geometry;
        a.store_ = store;
        a.extrinsic_ = false;
        return a;
    }

    static Agent extrinsic(const BackgroundModel* background, const Encoder* encoder,
                           const TripletStore* store, const ThresholdTable* table) {
        Agent a;
        a.background_ = background;
        a.encoder_ = encoder;
        a.encoded_store_ = store;
        a.table_ = table;
        a.extrinsic_ = true;
        return a;
    }

    AgentState state() const { return state_; }
    bool waiting() const { return state_ == AgentState::WaitForGoal; }
    std::size_t actions_emitted() const { return actions_emitted_; }

    std::optional<PushAction> step(const Image& observation, const Image* goal,
                                   std::int64_t remaining_timesteps) {
        if (!extrinsic_ && goal != nullptr)
            throw PhaseError("intrinsic agent received a goal");
        if (extrinsic_ && goal == nullptr)
            throw PhaseError("extrinsic agent requires a goal");
        if (state_ == AgentState::WaitForGoal) return std::nullopt;

        state_ = AgentState::ActionStart;
        if (!extrinsic_) {
            state_ = AgentState::ProposeAction;
            pre_snapshot_ = observation;
            pending_action_ = propose_action(*rng_, mode_, geometry_);
            state_ = AgentState::DoAction;
            ++actions_emitted_;
            return pending_action_;
        }

        state_ = AgentState::PlanAction;

        // Replanning is deterministic: if the last action left the world
        // untouched, planning again from the identical observation would
        // regenerate the identical plan. Continue with its next action
        // instead of repeating the one that just failed; once the plan runs
        // out without any effect, nothing new can happen this trial.
        if (pending_plan_ && last_observation_ && observation == *last_observation_) {
            ++plan_cursor_;
            if (plan_cursor_ >= pending_plan_->actions.size()) {
                state_ = AgentState::WaitForGoal;
                return std::nullopt;
            }
            pending_action_ = pending_plan_->actions[plan_cursor_];
            last_observation_ = observation;
            state_ = AgentState::DoAction;
            ++actions_emitted_;
            return pending_action_;
        }

        const Latent current = encoder_->encode(background_->foreground(observation));
        const Latent target = encoder_->encode(background_->foreground(*goal));
        const int max_depth = compute_max_depth(remaining_timesteps);
        auto found = plan(current, target, *encoded_store_, *table_, max_depth);
        if (!found) {
            state_ = AgentState::WaitForGoal;
            return std::nullopt;
        }
        if (found->actions.empty()) {
            // Already at the goal at the level the plan was found.
            state_ = AgentState::ActionStart;
            return std::nullopt;
        }
        pending_plan_ = std::move(*found);
        plan_cursor_ = 0;
        last_observation_ = observation;
        pending_action_ = pending_plan_->actions.front();  // replan after execution
        state_ = AgentState::DoAction;
        ++actions_emitted_;
        return pending_action_;
    }

    /// Called after the simulator has run the emitted action; the intrinsic
    /// agent records the triplet here.
    void finish(const Image& post_observation) {
        if (state_ != AgentState::DoAction) return;
        state_ = AgentState::EndAction;
        if (!extrinsic_) store_->record(std::move(*pre_snapshot_), *pending_action_, post_observation);
        pre_snapshot_.reset();
        pending_action_.reset();
        state_ = AgentState::ActionStart;
    }

    void reset_trial() {
        state_ = AgentState::ActionStart;
        pre_snapshot_.reset();
        pending_action_.reset();
        pending_plan_.reset();
        last_observation_.reset();
        plan_cursor_ = 0;
        actions_emitted_ = 0;
    }

  private:
    Agent() = default;

    bool extrinsic_ = false;
    AgentState state_ = AgentState::ActionStart;
    std::optional<Image> pre_snapshot_;
    std::optional<PushAction> pending_action_;
    std::optional<Plan> pending_plan_;
    std::optional<Image> last_observation_;
    std::size_t plan_cursor_ = 0;
    std::size_t actions_emitted_ = 0;

    // intrinsic wiring
    Rng* rng_ = nullptr;
    ExplorationMode mode_ = ExplorationMode::Round1;
    TableGeometry geometry_;
    TripletStore* store_ = nullptr;

    // extrinsic wiring
    const BackgroundModel* background_ = nullptr;
    const Encoder* encoder_ = nullptr;
    const TripletStore* encoded_store_ = nullptr;
    const ThresholdTable* table_ = nullptr;
};

}  // namespace oel
