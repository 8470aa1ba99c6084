#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "boa/errors.hpp"
#include "boa/rng.hpp"

namespace boa {

enum class Task : std::uint8_t {
    hallway,
    one_room,
    four_rooms,
    t_maze,
    maze_s3,
    pick_place,
};

Task task_from_name(const std::string& name);
std::string task_name(Task task);

// Cell codes as seen in observations. The enumeration is part of the
// dataset file format; do not reorder.
enum class Cell : std::uint8_t {
    wall = 0,
    floor = 1,
    goal = 2,
    yellow_block = 3,
    red_block = 4,
    out_of_bounds = 5,
};

// Discrete actions. Navigation tasks use the first three (K = 3);
// pick_place uses all six (K = 6).
inline constexpr int kActionLeft = 0;
inline constexpr int kActionRight = 1;
inline constexpr int kActionForward = 2;
inline constexpr int kActionBack = 3;
inline constexpr int kActionPickUp = 4;
inline constexpr int kActionDrop = 5;

enum class Heading : std::uint8_t { north = 0, east = 1, south = 2, west = 3 };

struct EnvSpec {
    Task task = Task::hallway;
    int width = 0;        // full grid including border walls
    int height = 0;       // full grid including border walls
    int max_steps = 0;    // episode horizon T
    int view_radius = 3;  // egocentric window is (2r+1) x (2r+1)
    std::uint64_t seed = 0;

    // Task defaults: layout dimensions sized for desk-scale runs, T = 100
    // for navigation and 200 for pick_place, view radius 3.
    static EnvSpec defaults(Task task, std::uint64_t seed);

    int action_count() const { return task == Task::pick_place ? 6 : 3; }
    int obs_width() const { return 2 * view_radius + 1; }

    // Structural hash over everything except the seed, so episodes of the
    // same task configuration share a fingerprint.
    std::uint64_t fingerprint() const;
};

// Egocentric observation: a (2r+1)^2 window of cell codes rotated so the
// agent faces up, with the agent at the center, plus the carried flag.
struct Observation {
    int width = 0;
    std::vector<std::uint8_t> cells;
    bool carried = false;

    bool operator==(const Observation&) const = default;

    // Canonical byte encoding: cell codes row-major, then carried as 0/1.
    std::vector<std::uint8_t> canonical_bytes() const;
    std::uint64_t hash() const;
};

// Rotated window extraction over a painted grid (base layout with goal and
// block codes already applied). Cells outside [0,h)x[0,w) read as
// out_of_bounds. Exposed for observation-locality tests.
Observation egocentric_window(const std::vector<std::uint8_t>& grid, int grid_w, int grid_h,
                              int row, int col, Heading heading, int radius, bool carried);

struct GridPos {
    int row = -1;
    int col = -1;
    bool operator==(const GridPos&) const = default;
};

struct EnvState {
    GridPos agent;
    Heading heading = Heading::north;
    int t = 0;
    GridPos goal;                 // navigation tasks
    GridPos yellow;               // pick_place; (-1,-1) while carried
    GridPos red;                  // pick_place
    bool carrying = false;
    bool terminated = false;
    bool success = false;
};

struct StepResult {
    Observation observation;
    double reward = 0.0;
    bool done = false;
    bool success = false;
};

// Deterministic POMDP gridworld. Layout, goal and spawn are derived from
// EnvSpec::seed; (EnvSpec, action sequence) fully determines every
// observation, reward and flag.
class Env {
public:
    explicit Env(const EnvSpec& spec);

    const EnvSpec& spec() const { return spec_; }
    const EnvState& state() const { return state_; }
    int grid_width() const { return width_; }
    int grid_height() const { return height_; }

    Observation observe() const;
    StepResult step(int action);

    // Scripted demonstrator: one action on a BFS shortest path to the
    // current objective, turns counted as steps. Deterministic tie-break
    // prefers forward, then left, then right, then back.
    int expert_action() const;

    // Every first action that lies on some shortest path (for tie-noise).
    std::vector<int> expert_optimal_actions() const;

    // Total expert episode length from the initial state (turns included;
    // for pick_place includes the pick and drop actions).
    int expert_path_length() const { return expert_path_length_; }

    bool walkable(int row, int col) const;

    // Base layout with goal/block codes painted in, row-major.
    std::vector<std::uint8_t> painted_grid() const;

    std::string render_ascii() const;

private:
    int cell_index(int row, int col) const { return row * width_ + col; }
    int state_index(int row, int col, Heading h) const {
        return cell_index(row, col) * 4 + static_cast<int>(h);
    }
    GridPos ahead(const GridPos& p, Heading h) const;
    bool in_bounds(int row, int col) const {
        return row >= 0 && row < height_ && col >= 0 && col < width_;
    }
    bool position_free(const GridPos& p) const;  // walkable and not block-occupied

    void generate_layout(Rng& rng);
    void place_entities(Rng& rng);
    std::vector<int> reverse_bfs(const std::vector<std::uint8_t>& goal_states,
                                 const std::vector<std::uint8_t>& blocked, bool allow_back) const;
    void plan_expert();
    void plan_pick_phase() const;
    const std::vector<int>& current_phase_distances() const;
    int distance_at(const std::vector<int>& dist, const GridPos& p, Heading h) const;

    EnvSpec spec_;
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> base_;  // wall / floor
    EnvState state_;
    std::vector<int> dist_nav_;             // navigation: distance to goal
    mutable std::vector<int> dist_pick_;    // pick_place phase 1: facing yellow
    mutable GridPos planned_yellow_;        // yellow position dist_pick_ was planned for
    std::vector<int> dist_drop_;            // pick_place phase 2: facing a drop cell
    int expert_path_length_ = 0;
};

// BFS over walkable cells, ignoring heading. Used by layout-reachability
// tests; returns -1 when unreachable.
int bfs_cell_distance(const Env& env, GridPos from, GridPos to);

}  // namespace boa
