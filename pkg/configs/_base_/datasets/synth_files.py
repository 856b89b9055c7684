# written by `zsml synth-gen --out data/synth`
data = dict(
    embeddings='data/synth/embeddings.txt',
    source='data/synth/source.csv',
    target='data/synth/target.csv')
