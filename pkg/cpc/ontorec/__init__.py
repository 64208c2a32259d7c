# Make all exceptions available at the base package level (eg. from cpc.ontorec import StateError)
from .exceptions import *

# Make the main objects available at the base package level (eg. from cpc.ontorec import load_kb)
from .kb import KnowledgeBase, load_kb, load_kb_file
from .classify import PaperDatabase, TrainingSet, adaboost_train, boosted_classify, ibk_classify
from .profile import InterestProfile, compute_profile
from .recommend import recommend
from .cop import identify_cop
from .bootstrap import BootstrapParams, new_system_profile, new_user_profile
from .config import Config, load_config
