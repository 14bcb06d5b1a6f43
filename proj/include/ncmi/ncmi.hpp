#pragma once

#include "ncmi/baselines.hpp"
#include "ncmi/bounds.hpp"
#include "ncmi/core.hpp"
#include "ncmi/engine.hpp"
#include "ncmi/gf256.hpp"
#include "ncmi/grouping.hpp"
#include "ncmi/instance_io.hpp"
#include "ncmi/knowledge_space.hpp"
#include "ncmi/ncmi_b.hpp"
#include "ncmi/ncmi_i.hpp"
#include "ncmi/schemes.hpp"
#include "ncmi/trace.hpp"
