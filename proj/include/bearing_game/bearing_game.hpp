#pragma once

#include "bearing_game/artifacts.hpp"
#include "bearing_game/engine.hpp"
#include "bearing_game/errors.hpp"
#include "bearing_game/game_solver.hpp"
#include "bearing_game/geometry3d.hpp"
#include "bearing_game/kinematics.hpp"
#include "bearing_game/report.hpp"
#include "bearing_game/scenario_file.hpp"
#include "bearing_game/scenarios.hpp"
#include "bearing_game/strategies.hpp"
#include "bearing_game/suite.hpp"
#include "bearing_game/vec.hpp"
