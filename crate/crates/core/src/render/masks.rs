//! One-hot class masks.
//!
//! Both modes cast exactly one unjittered ray through each pixel center, so a
//! pixel belongs to class `c` iff the nearest surface along that ray is a part
//! of class `c`. Occluding parts of other classes (or unlabeled parts) stay 0.

use crate::error::{Error, Result};
use crate::scene::{FeatureClass, SceneInstance, SubjectModel, CLASS_COUNT};

use super::beauty::Prepared;
use super::image::ClassMask;
use super::{render_tiles, MaskMode, RenderSettings};

const NO_CLASS: u8 = u8::MAX;

pub fn render_class_masks(
    scene: &SceneInstance,
    subject: &SubjectModel,
    settings: &RenderSettings,
    mode: MaskMode,
) -> Result<Vec<ClassMask>> {
    settings.validate()?;
    if !subject.has_full_registry() {
        return Err(Error::param("subject does not carry all eight feature classes"));
    }
    let prepared = Prepared::new(scene, Some(subject))?;
    Ok(match mode {
        MaskMode::PerClassPass => per_class_pass(&prepared, settings),
        MaskMode::IdBuffer => id_buffer(&prepared, settings),
    })
}

/// Emulates the unlit mask model: everything black, one class recoloured
/// white per capture, thresholded at 0.5.
fn per_class_pass(p: &Prepared<'_>, settings: &RenderSettings) -> Vec<ClassMask> {
    let cam = &p.scene.camera;
    FeatureClass::all()
        .map(|class| {
            let unlit: Vec<f64> = p
                .group_class
                .iter()
                .map(|&c| if c == Some(class.id()) { 1.0 } else { 0.0 })
                .collect();
            let radiance = render_tiles(cam.width, cam.height, settings.tile_size, |x, y| {
                p.nearest(&cam.center_ray(x, y)).map_or(0.0, |h| unlit[h.group as usize])
            });
            let bits = radiance.iter().map(|&v| u8::from(v > 0.5)).collect();
            ClassMask::from_bits(class, cam.width, cam.height, bits).expect("binary by construction")
        })
        .collect()
}

fn id_buffer(p: &Prepared<'_>, settings: &RenderSettings) -> Vec<ClassMask> {
    let cam = &p.scene.camera;
    let ids = render_tiles(cam.width, cam.height, settings.tile_size, |x, y| {
        p.nearest(&cam.center_ray(x, y))
            .and_then(|h| p.group_class[h.group as usize])
            .unwrap_or(NO_CLASS)
    });
    let mut masks: Vec<ClassMask> = FeatureClass::all()
        .map(|c| ClassMask::empty(c, cam.width, cam.height))
        .collect();
    for (i, &id) in ids.iter().enumerate() {
        if (id as usize) < CLASS_COUNT {
            masks[id as usize].set(i);
        }
    }
    masks
}

/// Pixels whose center ray hits any part of the subject.
pub fn render_silhouette(scene: &SceneInstance, subject: &SubjectModel, settings: &RenderSettings) -> Result<Vec<bool>> {
    let p = Prepared::new(scene, Some(subject))?;
    let cam = &scene.camera;
    Ok(render_tiles(cam.width, cam.height, settings.tile_size, |x, y| {
        p.nearest(&cam.center_ray(x, y)).is_some()
    }))
}
