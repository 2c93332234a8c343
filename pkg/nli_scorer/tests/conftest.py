import json

import pytest
import torch

from nliscorer.config import DEFAULT_CHECKPOINT

VOCAB = """[PAD]
[UNK]
[CLS]
[SEP]
[MASK]
the
a
man
woman
dog
cat
is
was
not
playing
sleeping
running
guitar
ball
park
snow
train
station
full
empty
exam
passed
failed
bought
apples
fruit
stadium
chef
food
children
outside
bed
marathon
windowsill
nowhere
market
score
tonight
time
says
will
pay
dollars
for
old
house
she
he
won
number
bridge
museum
quiet
believes
remain
weak
""".strip().splitlines()


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory):
    """A 3-label random-weight checkpoint for offline protocol tests."""
    from transformers import BertConfig, BertForSequenceClassification

    directory = tmp_path_factory.mktemp("tiny-nli-model")
    (directory / "vocab.txt").write_text("\n".join(VOCAB) + "\n")
    config = BertConfig(
        vocab_size=len(VOCAB), hidden_size=32, num_hidden_layers=1,
        num_attention_heads=2, intermediate_size=64,
        max_position_embeddings=96, num_labels=3)
    torch.manual_seed(20240808)
    model = BertForSequenceClassification(config)
    model.save_pretrained(directory)
    tokenizer_config = {"tokenizer_class": "BertTokenizer",
                        "do_lower_case": True}
    (directory / "tokenizer_config.json").write_text(
        json.dumps(tokenizer_config))
    return str(directory)


def _real_checkpoint_loadable() -> bool:
    from transformers import AutoTokenizer

    try:
        AutoTokenizer.from_pretrained(DEFAULT_CHECKPOINT, local_files_only=True)
        return True
    except Exception:
        pass
    try:
        AutoTokenizer.from_pretrained(DEFAULT_CHECKPOINT)
        return True
    except Exception:
        return False


@pytest.fixture(scope="session")
def real_checkpoint():
    """The pretrained checkpoint, or a clean skip when unreachable."""
    if not _real_checkpoint_loadable():
        pytest.skip(f"checkpoint {DEFAULT_CHECKPOINT} not available "
                    "(no cache and no reachable model hub)")
    return DEFAULT_CHECKPOINT
