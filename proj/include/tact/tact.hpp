// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <tact/banded_operator.hpp>
#include <tact/dynamics.hpp>
#include <tact/expm.hpp>
#include <tact/krylov.hpp>
#include <tact/observables.hpp>
#include <tact/spin.hpp>
#include <tact/spin_state.hpp>
#include <tact/states.hpp>
