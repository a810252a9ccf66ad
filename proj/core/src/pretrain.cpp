#include "teeshield/pretrain.hpp"

#include "teeshield/errors.hpp"
#include "teeshield/hash.hpp"

namespace teeshield {

PretrainResult make_public_and_victim(const ModelGraph& structure, const DatasetBundle& bundle,
                                      const PretrainConfig& cfg) {
    bundle.validate();

    // The auxiliary task mirrors the bundle's geometry but shifts the class
    // parameters, so the public model carries transferable low-level features
    // without the victim's decision boundary.
    DatasetParams aux;
    aux.seed = derive_seed(cfg.seed, "pretrain/aux-data");
    aux.num_classes = bundle.num_classes;
    aux.per_class = bundle.members.size() / bundle.num_classes;
    aux.image_shape = bundle.image_shape;
    aux.variant = DatasetVariant::Auxiliary;
    DatasetBundle aux_bundle = generate_synthetic_dataset(aux);

    PretrainResult out;

    ModelGraph model = structure;
    model.init_params(derive_seed(cfg.seed, "pretrain/init"));

    TrainConfig pub_cfg;
    pub_cfg.epochs = cfg.public_epochs;
    pub_cfg.batch_size = cfg.batch_size;
    pub_cfg.sgd = cfg.public_sgd;
    pub_cfg.seed = derive_seed(cfg.seed, "pretrain/public");
    out.public_loss = train(model, aux_bundle.members, pub_cfg).loss_per_epoch;
    out.public_ckpt = checkpoint_from(model, Provenance::Public);

    TrainConfig fine_cfg;
    fine_cfg.epochs = cfg.finetune_epochs;
    fine_cfg.batch_size = cfg.batch_size;
    fine_cfg.sgd = cfg.finetune_sgd;
    fine_cfg.seed = derive_seed(cfg.seed, "pretrain/finetune");
    fine_cfg.record_replay = true;
    TrainResult fine = train(model, bundle.members, fine_cfg);
    out.victim_loss = fine.loss_per_epoch;
    out.replay = std::move(fine.replay);
    out.victim_ckpt = checkpoint_from(model, Provenance::Victim);
    return out;
}

}  // namespace teeshield
